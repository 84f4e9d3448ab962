"""Tower arithmetic: construction, canonical forms, inversion, embedding,
norms, and the generic radical extension."""
import random

import pytest

from graphfield.errors import (
    DepthExceeded,
    ProfileNotLarger,
    SpecInvalid,
    TooLarge,
)
from graphfield.fieldtower import (
    RadicalSpec,
    TowerContext,
    TowerElement,
    build_tower,
    choose_primes,
    edge_label,
    embed,
    field_norm,
    generator_edge,
    generator_vertex,
    primality_smoke,
    radical_extend,
    random_nonzero_element,
    random_structured_monomial,
)
from graphfield.graphs import Graph, greedy_star_coloring
from graphfield.polynomials import Poly
from graphfield.ratfunc import RatFunc


def k2_ctx(char=0, vdepth=1, edepth=1):
    g = Graph(["s", "t"], [("s", "t")])
    return build_tower(greedy_star_coloring(g), char=char, vertex_depths=vdepth, edge_depths=edepth)


def p3_ctx():
    g = Graph(["a", "b", "c"], [("a", "b"), ("b", "c")])
    return build_tower(greedy_star_coloring(g), char=0)


def test_choose_primes():
    assert choose_primes(0, 7) == (3, 5, 7, 11, 13, 17, 19, 23)
    assert choose_primes(3, 7) == (5, 7, 11, 13, 17, 19, 23, 29)
    assert choose_primes(7, 7) == (5, 11, 13, 17, 19, 23, 29, 31)


def test_build_tower_k2():
    ctx = k2_ctx()
    assert ctx.dimension == 5
    assert ctx.chain_prime == 3 and ctx.gens[0].prime == 5
    # the defining polynomial is X_s^3 + X_t^3 + 1
    A = ctx.gen_poly(0)
    F = ctx.field
    expected = (
        Poly.var(F, 2, 0, 3) + Poly.var(F, 2, 1, 3) + Poly.one(F, 2)
    )
    assert A == expected


def test_build_tower_dimensions():
    assert k2_ctx(edepth=2).dimension == 25
    assert k2_ctx(edepth=0).dimension == 1
    assert p3_ctx().dimension == 25


def test_build_tower_cap():
    g = Graph(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    with pytest.raises(TooLarge):
        build_tower(greedy_star_coloring(g), char=0, edge_depths=3, cap=2000)


def test_generator_relations():
    ctx = k2_ctx()
    xs0 = generator_vertex(ctx, "s", 0)
    xs1 = generator_vertex(ctx, "s", 1)
    xt0 = generator_vertex(ctx, "t", 0)
    xe0 = generator_edge(ctx, "e:s,t", 0)
    xe1 = generator_edge(ctx, "e:s,t", 1)
    assert xs1**3 == xs0
    assert xe1**5 == xe0
    assert xe0 == xs0 + xt0 + ctx.one()
    assert (xe0 - xs0 - xt0 - ctx.one()).is_zero()


def test_generator_depth_bounds():
    ctx = k2_ctx()
    with pytest.raises(DepthExceeded):
        generator_vertex(ctx, "s", 2)
    with pytest.raises(DepthExceeded):
        generator_edge(ctx, "e:s,t", 2)


def test_field_axioms_random():
    ctx = k2_ctx()
    rng = random.Random(0)
    for _ in range(15):
        a = random_nonzero_element(ctx, rng, max_terms=2)
        b = random_nonzero_element(ctx, rng, max_terms=2)
        c = random_nonzero_element(ctx, rng, max_terms=2)
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        assert (a - b) + b == a
        assert (a * a.inv()).is_one()


def test_canonical_equality():
    ctx = k2_ctx()
    rng = random.Random(1)
    a = random_nonzero_element(ctx, rng)
    b = random_nonzero_element(ctx, rng)
    assert (a - b).is_zero() == (a == b)
    assert (a - a).is_zero()


def test_inverse_examples():
    ctx = k2_ctx()
    xe0 = generator_edge(ctx, "e:s,t", 0)
    xe1 = generator_edge(ctx, "e:s,t", 1)
    one = ctx.one()
    assert (xe0.inv() * xe0).is_one()
    assert ((one + xe1).inv() * (one + xe1)).is_one()
    # (x_e^1)^5 multiplies back to the vertex relation
    xs0 = generator_vertex(ctx, "s", 0)
    xt0 = generator_vertex(ctx, "t", 0)
    prod = xe1 * xe1 * xe1 * xe1 * xe1
    assert prod == xs0 + xt0 + one


def test_char3_tower():
    ctx = k2_ctx(char=3)
    assert ctx.chain_prime == 5  # 3 is excluded as the characteristic
    rng = random.Random(2)
    for _ in range(5):
        a = random_nonzero_element(ctx, rng, max_terms=2, allow_denominator=False)
        assert (a * a.inv()).is_one()


def test_char2_tower():
    ctx = k2_ctx(char=2)
    assert choose_primes(2, 1) == (3, 5)
    assert ctx.chain_prime == 3 and ctx.dimension == 5
    xs0 = generator_vertex(ctx, "s", 0)
    xt0 = generator_vertex(ctx, "t", 0)
    xe0 = generator_edge(ctx, "e:s,t", 0)
    assert xe0 == xs0 + xt0 + ctx.one()
    rng = random.Random(8)
    for _ in range(5):
        a = random_nonzero_element(ctx, rng, max_terms=2, allow_denominator=False)
        assert (a * a.inv()).is_one()


def test_embed_homomorphism():
    ctx = k2_ctx()
    deeper = ctx.deepen(vertex_delta=1, edge_delta=1)
    rng = random.Random(3)
    for _ in range(8):
        a = random_nonzero_element(ctx, rng, max_terms=2)
        b = random_nonzero_element(ctx, rng, max_terms=2)
        assert embed(a + b, deeper) == embed(a, deeper) + embed(b, deeper)
        assert embed(a * b, deeper) == embed(a, deeper) * embed(b, deeper)
    assert embed(ctx.one(), deeper).is_one()
    assert embed(generator_vertex(ctx, "s", 0), deeper) == generator_vertex(deeper, "s", 0)
    # distinct generators stay distinct
    assert embed(generator_vertex(ctx, "s", 0), deeper) != embed(
        generator_vertex(ctx, "t", 0), deeper
    )


def test_embed_rejects_shrinking():
    ctx = k2_ctx()
    shallower = ctx.with_depths({"s": 0, "t": 0}, {})
    a = generator_vertex(ctx, "s", 0)
    with pytest.raises(ProfileNotLarger):
        embed(a, shallower)


def test_algebraic_independence_bounded_search():
    # no nonzero small-coefficient polynomial of total degree <= 3
    # annihilates the bottom vertex roots
    ctx = k2_ctx()
    xs0 = generator_vertex(ctx, "s", 0)
    xt0 = generator_vertex(ctx, "t", 0)
    from itertools import product

    for coeffs in product((-1, 0, 1), repeat=9):
        if not any(coeffs):
            continue
        acc = ctx.zero()
        i = 0
        for dx in range(3):
            for dy in range(3):
                if coeffs[i]:
                    acc = acc + (xs0**dx) * (xt0**dy) * ctx.constant(coeffs[i])
                i += 1
        assert not acc.is_zero()


def test_norm_companion_example():
    # Q(z0)(z1) with z1^3 = z0: the norm of z1 down to Q(z0) is z0
    single = TowerContext(0, ("z",), 3, {"z": 1}, [], cap=10)
    sub = single.with_depths({"z": 0}, {})
    z1 = generator_vertex(single, "z", 1)
    assert field_norm(z1, sub) == generator_vertex(sub, "z", 0)


def test_norm_of_base_is_power():
    ctx = k2_ctx()
    sub = ctx.with_depths({"s": 1, "t": 1}, {"e:s,t": 0})
    c = ctx.constant(7)
    assert field_norm(c, sub) == sub.constant(7**5)


def test_norm_multiplicative():
    ctx = k2_ctx()
    sub = ctx.with_depths({"s": 1, "t": 1}, {"e:s,t": 0})
    rng = random.Random(4)
    for _ in range(4):
        a = random_nonzero_element(ctx, rng, max_terms=2, allow_denominator=False)
        b = random_nonzero_element(ctx, rng, max_terms=2, allow_denominator=False)
        assert field_norm(a * b, sub) == field_norm(a, sub) * field_norm(b, sub)


def test_radical_extension():
    spec = RadicalSpec(p=3, branch_primes=(5,), partition={"v": 0}, polys={"v": (1, 1)})
    ctx = radical_extend(spec, char=0, z_depth=1, depths=1)
    assert ctx.dimension == 5
    t1 = generator_edge(ctx, "t:v", 1)
    z0 = generator_vertex(ctx, "z", 0)
    assert t1**5 == z0 + ctx.one()
    rng = random.Random(5)
    for _ in range(5):
        a = random_nonzero_element(ctx, rng, max_terms=2)
        assert (a * a.inv()).is_one()


def test_radical_spec_validation():
    with pytest.raises(SpecInvalid):
        radical_extend(RadicalSpec(p=3, branch_primes=(5,), partition={"v": 0}, polys={"v": (5,)}))
    with pytest.raises(SpecInvalid):
        radical_extend(RadicalSpec(p=3, branch_primes=(5,), partition={"v": 0}, polys={"v": (0, 1)}))
    with pytest.raises(SpecInvalid):
        # (X+1)^2 is not separable
        radical_extend(RadicalSpec(p=3, branch_primes=(5,), partition={"v": 0}, polys={"v": (1, 2, 1)}))
    with pytest.raises(SpecInvalid):
        radical_extend(
            RadicalSpec(
                p=3,
                branch_primes=(5, 7),
                partition={"v": 0, "w": 1},
                polys={"v": (1, 1), "w": (2, 3, 1)},
            )
        )
    with pytest.raises(SpecInvalid):
        radical_extend(RadicalSpec(p=4, branch_primes=(5,), partition={"v": 0}, polys={"v": (1, 1)}))


def test_radical_extension_matches_single_vertex_step():
    # T_v(X) = X + c + 1 reproduces the per-vertex extension step of the
    # graph tower: same defining polynomial family, same arithmetic
    spec = RadicalSpec(p=3, branch_primes=(5,), partition={"v": 0}, polys={"v": (2, 1)})
    ctx = radical_extend(spec, char=0, z_depth=1, depths=1)
    A = ctx.gen_poly(0)
    F = ctx.field
    assert A == Poly.var(F, 1, 0, 3) + Poly.const(F, 1, F.of_int(2))


def test_primality_smoke():
    ctx = k2_ctx()
    rep = primality_smoke(ctx, trials=30, seed=0)
    assert rep["pass"] and rep["failures"] == []
    flat = k2_ctx(edepth=0)  # polynomial ring over a field
    rep2 = primality_smoke(flat, trials=20, seed=1)
    assert rep2["pass"]


def test_structured_monomial_sampler_shape():
    ctx = k2_ctx()
    rng = random.Random(6)
    from graphfield.roots import classify_p_high

    for _ in range(20):
        m = random_structured_monomial(ctx, rng, p=3)
        if m.is_base() and m.base_value().is_constant():
            continue
        form, why = classify_p_high(m, 3)
        assert form is not None, why


def test_serialization_roundtrip_shape():
    ctx = k2_ctx()
    rng = random.Random(7)
    a = random_nonzero_element(ctx, rng)
    doc = a.to_json()
    assert doc["gens"] == ["e:s,t"]
    assert doc["vars"] == ["s", "t"]
    assert all(set(t) == {"exps", "num", "den"} for t in doc["terms"])


def test_edge_label_helper():
    assert edge_label(frozenset(("t", "s"))) == "e:s,t"
