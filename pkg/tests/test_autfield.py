"""Graph symmetries acting on the tower: sigma, supports, the codec."""
import random

import pytest

from graphfield.autfield import (
    FieldAut,
    apply,
    encode_element,
    minimal_support,
    sigma,
    verify_edge_image,
    verify_injectivity_sigma,
)
from graphfield.errors import ColorViolation
from graphfield.fieldtower import (
    build_tower,
    edge_label,
    generator_edge,
    generator_vertex,
    random_nonzero_element,
)
from graphfield.graphs import Graph, GraphAut, graph_auts, transform


def k2_plus_ctx():
    cg = transform(Graph(["s", "t"], [("s", "t")]))
    att = {e for e in cg.edges if any(v.startswith("1:") for v in e)}
    depths = {edge_label(e): (1 if e in att else 0) for e in cg.edges}
    return cg, build_tower(cg, char=0, vertex_depths=1, edge_depths=depths, cap=3000)


def k3_plus_ctx():
    cg = transform(Graph(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")]))
    # depth on the z-a inner edges: one per gadget copy, an Aut-closed orbit
    depths = {}
    for e in cg.edges:
        a, b = sorted(e)
        inner = a.startswith("2:") and b.startswith("2:")
        za = inner and {a.rsplit(":", 1)[1], b.rsplit(":", 1)[1]} == {"z", "a"}
        depths[edge_label(e)] = 1 if za else 0
    # the coloring of the transform is not a star coloring for a triangle;
    # the substitution machinery does not depend on that property
    return cg, build_tower(cg, char=0, vertex_depths=1, edge_depths=depths, cap=3000,
                           require_stars=False)


def test_sigma_identity_and_swap():
    cg, ctx = k2_plus_ctx()
    auts = graph_auts(cg)
    ident = next(p for p in auts if p.is_identity())
    assert sigma(ident, ctx).is_identity()
    swap = next(p for p in auts if not p.is_identity())
    al = sigma(swap, ctx)
    xs0 = generator_vertex(ctx, "1:s", 0)
    xt0 = generator_vertex(ctx, "1:t", 0)
    assert apply(al, xs0) == xt0


def test_sigma_is_group_homomorphism():
    cg, ctx = k2_plus_ctx()
    auts = graph_auts(cg)
    for a in auts:
        for b in auts:
            lhs = sigma(a.compose(b), ctx)
            rhs = sigma(a, ctx).compose(sigma(b, ctx))
            assert lhs.vertex_map == rhs.vertex_map


def test_sigma_injectivity_reports():
    for maker, order in ((k2_plus_ctx, 2), (k3_plus_ctx, 6)):
        cg, ctx = maker()
        rep = verify_injectivity_sigma(ctx)
        assert rep["pass"] and rep["aut_count"] == order


def test_sigma_rejects_color_breaking_maps():
    cg, ctx = k2_plus_ctx()
    ks = sorted(cg.vertices)
    vm = {v: v for v in cg.vertices}
    inner = [v for v in ks if v.startswith("2:")]
    vm[inner[0]], vm[inner[1]] = vm[inner[1]], vm[inner[0]]
    with pytest.raises((ColorViolation, ValueError)):
        FieldAut(ctx, vm)


def test_sigma_relation_substitution():
    cg, ctx = k2_plus_ctx()
    swap = next(p for p in graph_auts(cg) if not p.is_identity())
    al = sigma(swap, ctx)
    # the image of every defining relation is the image edge's relation
    for e in cg.edges:
        xe0 = generator_edge(ctx, edge_label(e), 0)
        img = apply(al, xe0)
        assert img == generator_edge(ctx, edge_label(swap.apply_edge(e)), 0)


def test_apply_fixes_prime_field_and_commutes_with_embed():
    cg, ctx = k2_plus_ctx()
    swap = next(p for p in graph_auts(cg) if not p.is_identity())
    al = sigma(swap, ctx)
    assert apply(al, ctx.constant(7)) == ctx.constant(7)
    from graphfield.fieldtower import embed
    deeper = ctx.deepen(vertex_delta=1)
    al_deep = sigma(swap, deeper)
    rng = random.Random(9)
    for _ in range(5):
        a = random_nonzero_element(ctx, rng, max_terms=2, allow_denominator=False)
        assert embed(apply(al, a), deeper) == apply(al_deep, embed(a, deeper))


def test_apply_ring_homomorphism_random():
    cg, ctx = k2_plus_ctx()
    swap = next(p for p in graph_auts(cg) if not p.is_identity())
    al = sigma(swap, ctx)
    rng = random.Random(0)
    for _ in range(10):
        a = random_nonzero_element(ctx, rng, max_terms=2, allow_denominator=False)
        b = random_nonzero_element(ctx, rng, max_terms=2, allow_denominator=False)
        assert apply(al, a * b) == apply(al, a) * apply(al, b)
        assert apply(al, a + b) == apply(al, a) + apply(al, b)
    assert apply(al, ctx.one()).is_one()


def test_edge_image_property():
    for maker in (k2_plus_ctx, k3_plus_ctx):
        cg, ctx = maker()
        for phi in graph_auts(cg):
            rep = verify_edge_image(ctx, sigma(phi, ctx))
            assert rep["pass"], rep


def test_minimal_support():
    cg, ctx = k2_plus_ctx()
    xs0 = generator_vertex(ctx, "1:s", 0)
    assert minimal_support(xs0) == {"1:s"}
    att_edges = [e for e in cg.edges if any(v.startswith("1:") for v in e)]
    e = sorted(att_edges, key=lambda e: sorted(e))[0]
    xe0 = generator_edge(ctx, edge_label(e), 0)
    assert minimal_support(xe0) == set(e)
    s, t = sorted(e)
    diff = xe0 - generator_vertex(ctx, s, 0) - ctx.one()
    assert minimal_support(diff) == {t}
    assert diff == generator_vertex(ctx, t, 0)
    assert minimal_support(ctx.zero()) == set()


def test_minimal_support_submultiplicative():
    cg, ctx = k2_plus_ctx()
    rng = random.Random(1)
    for _ in range(10):
        a = random_nonzero_element(ctx, rng, max_terms=2, allow_denominator=False)
        b = random_nonzero_element(ctx, rng, max_terms=2, allow_denominator=False)
        prod = a * b
        if prod.is_zero():
            continue
        assert minimal_support(prod) <= minimal_support(a) | minimal_support(b)


def test_codec_injective_on_random_pairs():
    cg, ctx = k2_plus_ctx()
    rng = random.Random(2)
    seen = {}
    for _ in range(400):
        a = random_nonzero_element(ctx, rng, max_terms=2, allow_denominator=False)
        key = encode_element(a).sequences
        if key in seen:
            assert seen[key] == a
        seen[key] = a


def test_codec_equivariance():
    for maker in (k2_plus_ctx, k3_plus_ctx):
        cg, ctx = maker()
        rng = random.Random(3)
        for phi in graph_auts(cg):
            al = sigma(phi, ctx)
            for _ in range(10):
                a = random_nonzero_element(ctx, rng, max_terms=2, allow_denominator=False)
                assert encode_element(apply(al, a)) == encode_element(a).relabel(phi.mapping)


def test_codec_shape():
    cg, ctx = k2_plus_ctx()
    xs0 = generator_vertex(ctx, "1:s", 0)
    code = encode_element(xs0)
    assert any(set(seq) == {"1:s"} for seq in code.sequences)
    assert encode_element(ctx.zero()).sequences == frozenset()
    assert encode_element(ctx.constant(5)) != encode_element(ctx.constant(7))
    assert code.to_json() == sorted(list(s) for s in code.sequences)
