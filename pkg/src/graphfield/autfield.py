"""From graph symmetries to field symmetries: the substitution
homomorphism out of Aut(Gamma), its verification, minimal supports, and
an order-free injective element encoding.

The encoding maps a tower element to a finite set of finite vertex
sequences.  No global vertex order is ever consulted: every atom of the
canonical form is emitted once per ordering of its own participating
vertices, with all numeric data packed positionally into the repetition
length of the trailing run.  Including all local orderings keeps the set
canonical, and relabeling vertices permutes the set elementwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .errors import ColorViolation
from .fieldtower import TowerContext, TowerElement, generator_vertex
from .graphs import GraphAut


class FieldAut:
    """The substitution X_s -> X_phi(s), Y_e -> Y_phi(e) induced by a
    color-preserving graph automorphism with matching root depths."""

    def __init__(self, ctx: TowerContext, vertex_map: dict):
        if ctx.colored_graph is None:
            raise ValueError("field automorphisms need a graph-built tower")
        cg = ctx.colored_graph
        aut = GraphAut(vertex_map)
        if set(vertex_map.keys()) != set(cg.vertices):
            raise ValueError("vertex map must be a bijection of the graph vertices")
        for e in cg.edges:
            img = aut.apply_edge(e)
            if img not in cg.edges:
                raise ValueError("vertex map is not a graph automorphism")
            if cg.colors[img] != cg.colors[e]:
                raise ColorViolation(f"edge {sorted(e)} changes color under the map")
        for v, w in vertex_map.items():
            if ctx.vertex_depths[v] != ctx.vertex_depths[w]:
                raise ValueError("vertex depths are not invariant under the map")
        self.ctx = ctx
        self.vertex_map = dict(vertex_map)
        self.var_perm = [ctx.var_index[vertex_map[v]] for v in ctx.var_names]
        gen_perm = []
        for g in ctx.gens:
            _, s, t = g.recipe
            img_label = "e:" + ",".join(sorted((vertex_map[s], vertex_map[t])))
            j = ctx.gen_index[img_label]
            if ctx.gens[j].depth != g.depth or ctx.gens[j].prime != g.prime:
                raise ValueError("edge depths are not invariant under the map")
            gen_perm.append(j)
        self.gen_perm = gen_perm
        # substitution must send each defining relation to the image relation
        for i, g in enumerate(ctx.gens):
            if ctx.gen_poly(i).permute_vars(self.var_perm) != ctx.gen_poly(gen_perm[i]):
                raise ValueError("substitution breaks a defining relation")

    def compose(self, other: "FieldAut") -> "FieldAut":
        return FieldAut(self.ctx, {v: self.vertex_map[w] for v, w in other.vertex_map.items()})

    def is_identity(self) -> bool:
        return all(v == w for v, w in self.vertex_map.items())

    def __eq__(self, other):
        return isinstance(other, FieldAut) and self.ctx is other.ctx and self.vertex_map == other.vertex_map

    def __hash__(self):
        return hash(frozenset(self.vertex_map.items()))

    def __repr__(self):
        moved = {v: w for v, w in self.vertex_map.items() if v != w}
        return f"FieldAut({moved or 'id'})"


def sigma(phi: GraphAut, ctx: TowerContext) -> FieldAut:
    """The field automorphism induced by a colored-graph automorphism."""
    return FieldAut(ctx, phi.mapping)


def apply(alpha: FieldAut, a: TowerElement) -> TowerElement:
    """Apply the substitution and re-canonicalize (a ring homomorphism)."""
    ctx = alpha.ctx
    out = {}
    for exps, c in a.coeffs.items():
        new_exps = [0] * len(exps)
        for i, k in enumerate(exps):
            new_exps[alpha.gen_perm[i]] = k
        out[tuple(new_exps)] = c.permute_vars(alpha.var_perm)
    return TowerElement(ctx, out)


def verify_edge_image(ctx: TowerContext, alpha: FieldAut) -> dict:
    """Every edge's bottom generators must map to the bottom generators of
    an edge of the same color."""
    cg = ctx.colored_graph
    vertex_gens = {v: generator_vertex(ctx, v, 0) for v in ctx.var_names}
    failures = []
    for e in sorted(cg.edges, key=lambda e: sorted(e)):
        s, t = sorted(e)
        img_s = _match_vertex_generator(ctx, apply(alpha, vertex_gens[s]), vertex_gens)
        img_t = _match_vertex_generator(ctx, apply(alpha, vertex_gens[t]), vertex_gens)
        if img_s is None or img_t is None:
            failures.append({"edge": [s, t], "reason": "image is not a vertex generator"})
            continue
        img_edge = frozenset((img_s, img_t))
        if img_edge not in cg.edges:
            failures.append({"edge": [s, t], "reason": "image pair is not an edge"})
        elif cg.colors[img_edge] != cg.colors[e]:
            failures.append({"edge": [s, t], "reason": "image edge has a different color"})
    return {"checked": len(cg.edges), "failures": failures, "pass": not failures}


def _match_vertex_generator(ctx, elem: TowerElement, vertex_gens: dict) -> str | None:
    for v, g in vertex_gens.items():
        if elem == g:
            return v
    return None


def verify_injectivity_sigma(ctx: TowerContext) -> dict:
    """sigma is injective: distinct graph automorphisms give distinct
    substitutions, witnessed on the bottom vertex generators."""
    from .graphs import graph_auts

    auts = graph_auts(ctx.colored_graph)
    vertex_gens = [generator_vertex(ctx, v, 0) for v in ctx.var_names]
    images = []
    for phi in auts:
        alpha = sigma(phi, ctx)
        images.append(tuple(apply(alpha, g) for g in vertex_gens))
    distinct = len(set(images))
    return {
        "aut_count": len(auts),
        "distinct_images": distinct,
        "pass": distinct == len(auts),
    }


def minimal_support(a: TowerElement) -> set:
    """The least vertex set Y with a in the subtower over Y, read off the
    canonical form."""
    if a.is_zero():
        return set()
    ctx = a.ctx
    return {ctx.var_names[i] for i in a.support_vars()}


# ---------------------------------------------------------------------------
# The order-free codec
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Code:
    """A finite set of finite vertex-label sequences."""

    sequences: frozenset

    def to_json(self) -> list:
        return sorted(list(s) for s in self.sequences)

    def relabel(self, mapping: dict) -> "Code":
        return Code(frozenset(tuple(mapping[v] for v in seq) for seq in self.sequences))


_PURE_BIT_CAP = 20  # single-vertex atoms with data this small use pure repetition


def _zigzag(n: int) -> int:
    return 2 * n if n >= 0 else -2 * n - 1


_GAMMA_CACHE: dict = {}


def _gamma_bits(z: int) -> tuple:
    """Elias-gamma bits of z >= 0 (self-delimiting)."""
    cached = _GAMMA_CACHE.get(z)
    if cached is None:
        body = bin(z + 1)[2:]
        cached = (0,) * (len(body) - 1) + tuple(int(b) for b in body)
        _GAMMA_CACHE[z] = cached
    return cached


def _stream_bits(values) -> tuple:
    out: tuple = ()
    for z in values:
        out += _gamma_bits(z)
    return out


def _bit_runs(first: str, second: str, bits) -> tuple:
    """Carry a bit stream as runs of length bit+1 alternating labels."""
    seq: list[str] = []
    labels = (first, second)
    append = seq.append
    for i, b in enumerate(bits):
        lab = labels[i & 1]
        append(lab)
        if b:
            append(lab)
    return tuple(seq)


def encode_element(a: TowerElement) -> Code:
    """The injective, automorphism-equivariant code of an element.

    Atoms are the (generator exponents, numerator/denominator side,
    monomial, coefficient) quadruples of the canonical form.  Each atom
    is emitted once per local choice -- an ordering of its own vertices,
    or a graph neighbor when only one vertex (or none) participates --
    so the resulting set never consults a global vertex order:

      two or more vertices: <pi_0, ..., pi_j> then the data bits carried
        by runs alternating pi_0 / pi_1 (the repeated pi_0 marks where
        the distinct-label prefix ends);
      one vertex v: pure repetition of v when the data is small, else
        <v, v, v> followed by data runs alternating u / v for every
        neighbor u of v;
      no vertex (prime-field constants): the same per vertex, with an
        even/odd length split keeping the two pure classes apart.

    Data bits are Elias-gamma streams of the side, the coefficient, the
    participating variable exponents in prefix order, and the generator
    exponents per position pair.
    """
    ctx = a.ctx
    cg = ctx.colored_graph
    if cg is None:
        raise ValueError("the codec is defined for graph-built towers")
    if not cg.edges:
        raise ValueError("the codec needs a graph with at least one edge")
    neighbors = {v: sorted(cg.graph.neighbors(v)) for v in cg.vertices}
    gen_endpoints = []
    for g in ctx.gens:
        _, s, t = g.recipe
        gen_endpoints.append(frozenset((s, t)))
    sequences = set()
    for exps, c in a.coeffs.items():
        for role, poly in ((0, c.num), (1, c.den)):
            for mono, q in poly.terms.items():
                verts = {ctx.var_names[i] for i, k in enumerate(mono) if k}
                for i, k in enumerate(exps):
                    if k:
                        verts |= gen_endpoints[i]
                qn, qd = _coeff_to_pair(ctx, q)
                if not verts:
                    bits = _stream_bits([role, qn, qd])
                    if len(bits) <= _PURE_BIT_CAP:
                        n = 6 + 2 * int("1" + "".join(map(str, bits)), 2)
                        for v in cg.vertices:
                            sequences.add((v,) * n)
                    else:
                        for v in cg.vertices:
                            for u in neighbors[v]:
                                sequences.add((v,) * 4 + _bit_runs(u, v, bits))
                elif len(verts) == 1:
                    (v,) = verts
                    bits = _stream_bits([role, qn, qd, mono[ctx.var_index[v]]])
                    if len(bits) <= _PURE_BIT_CAP:
                        n = 5 + 2 * int("1" + "".join(map(str, bits)), 2)
                        sequences.add((v,) * n)
                    else:
                        for u in neighbors[v]:
                            sequences.add((v,) * 3 + _bit_runs(u, v, bits))
                else:
                    head = _stream_bits((role, qn, qd))
                    vlist = sorted(verts)
                    vexp = {v: mono[ctx.var_index[v]] for v in vlist}
                    pair_exp = {}
                    for gi, ends in enumerate(gen_endpoints):
                        if exps[gi] and ends <= verts:
                            pair_exp[ends] = exps[gi]
                    for order in permutations(vlist):
                        tail = [vexp[v] for v in order]
                        for i1 in range(len(order)):
                            for i2 in range(i1 + 1, len(order)):
                                tail.append(pair_exp.get(frozenset((order[i1], order[i2])), 0))
                        bits = head + _stream_bits(tail)
                        sequences.add(order + _bit_runs(order[0], order[1], bits))
    return Code(frozenset(sequences))


def _coeff_to_pair(ctx, q) -> tuple[int, int]:
    if ctx.field.char == 0:
        return _zigzag(q.numerator), q.denominator
    return int(q), 1
