"""Graphs: the edge gadget, the transform, star colorings, structure codes.

The oracle for automorphism counts on small graphs is brute force over
all vertex permutations, independent of the backtracking search.
"""
import json
from itertools import permutations

import pytest

from graphfield.errors import Disconnected, NotFromTransform
from graphfield.graphs import (
    ColoredGraph,
    FiniteStructure,
    Graph,
    GraphAut,
    aut_graph,
    cayley_structure,
    check_star_coloring,
    code_structure,
    connected_graphs_up_to_iso,
    gadget,
    gadget_prime_edges,
    graph_auts,
    graph_from_json,
    graph_to_json,
    greedy_star_coloring,
    lift_aut,
    original_graph,
    restrict_aut,
    transform,
)
from graphfield.groups import Perm, closure


def brute_aut_count(g) -> int:
    """Independent oracle: count automorphisms by trying all bijections."""
    graph = g.graph if isinstance(g, ColoredGraph) else g
    colors = g.colors if isinstance(g, ColoredGraph) else None
    verts = sorted(graph.vertices)
    count = 0
    for img in permutations(verts):
        m = dict(zip(verts, img))
        ok = True
        for e in graph.edges:
            a, b = tuple(e)
            ie = frozenset((m[a], m[b]))
            if ie not in graph.edges or (colors is not None and colors[ie] != colors[e]):
                ok = False
                break
        if ok:
            count += 1
    return count


def K(n):
    vs = [f"v{i}" for i in range(n)]
    return Graph(vs, [(a, b) for i, a in enumerate(vs) for b in vs[i + 1 :]])


def path(n):
    vs = [f"v{i}" for i in range(n)]
    return Graph(vs, [(vs[i], vs[i + 1]) for i in range(n - 1)])


# -- gadget -------------------------------------------------------------------


def test_gadget_shape():
    g = gadget()
    assert len(g.vertices) == 6
    assert len(g.edges) == 9
    vals = {v: g.degree(v) for v in g.vertices}
    assert vals == {"z": 5, "b": 3, "c": 4, "x": 2, "y": 2, "a": 2}
    # z's valency is unique and not divisible by val(x)
    assert list(vals.values()).count(5) == 1
    assert 5 % vals["x"] != 0
    assert frozenset(("x", "y")) not in g.edges


def test_gadget_aut_is_xy_swap():
    g = gadget()
    assert brute_aut_count(g) == 2
    group = aut_graph(g)
    assert group.order == 2
    swap = next(p for p in group.elements if not p.is_identity())
    verts = group.points
    mapping = {verts[i]: verts[swap(i)] for i in range(6)}
    assert mapping["x"] == "y" and mapping["y"] == "x"
    assert all(mapping[v] == v for v in ("z", "a", "b", "c"))


def test_gadget_prime_has_seven_edges():
    prime = gadget_prime_edges()
    assert len(prime) == 7
    assert all("y" not in e for e in prime)


def test_aut_graph_examples():
    assert aut_graph(K(3)).order == 6
    assert aut_graph(path(3)).order == 2


# -- transform ----------------------------------------------------------------


def test_transform_k2_is_gadget():
    cg = transform(K(2))
    assert len(cg.vertices) == 6
    assert len(cg.edges) == 9
    # isomorphic to the gadget (brute force over bijections)
    g = gadget()
    gv = sorted(g.vertices)
    cv = sorted(cg.vertices)
    found = False
    for img in permutations(cv):
        m = dict(zip(gv, img))
        if all(frozenset((m[a], m[b])) in cg.edges for a, b in (tuple(e) for e in g.edges)):
            found = True
            break
    assert found
    assert aut_graph(cg).order == 2
    assert brute_aut_count(cg.graph) == 2


def test_transform_sizes():
    for g in (K(2), path(3), K(3), K(4)):
        cg = transform(g)
        assert len(cg.vertices) == len(g.vertices) + 4 * len(g.edges)
        assert cg.color_count == 7


def test_transform_rejects_disconnected():
    g = Graph(["a", "b", "c"], [("a", "b")])
    with pytest.raises(Disconnected):
        transform(g)


def test_transform_star_coloring_k2():
    rep = check_star_coloring(transform(K(2)))
    assert all(rep[c]["ok"] for c in range(7))


def test_transform_star_coloring_defect_on_larger_graphs():
    # With a vertex of degree >= 2, the two attachment colors contain
    # the subdivision of the input graph: each z-copy carries one edge to
    # both endpoints while every original vertex fans out to all its
    # copies, so the class components are paths/subdivisions, not stars.
    # The acceptance suite records this as the construction's known red
    # clause; here we pin the exact failure shape.
    rep = check_star_coloring(transform(path(3)))
    assert not rep[0]["ok"] and not rep[1]["ok"]
    assert all(rep[c]["ok"] for c in range(2, 7))
    witness = rep[0]["witness"]
    assert len(witness) == 4  # the subdivided path


def test_transform_aut_preserves_colors():
    # automorphisms of the bare graph already preserve the coloring
    cg = transform(path(3))
    bare = aut_graph(cg.graph)
    for p in bare.elements:
        verts = bare.points
        phi = GraphAut({verts[i]: verts[p(i)] for i in range(len(verts))})
        assert phi.is_automorphism_of(cg)


def test_restrict_and_lift_roundtrip():
    g = path(3)
    cg = transform(g)
    for psi in graph_auts(g):
        assert restrict_aut(cg, lift_aut(cg, psi)) == psi
    # the two groups have equal order and restriction is a bijection
    ups = graph_auts(cg)
    downs = {restrict_aut(cg, phi) for phi in ups}
    assert len(downs) == len(ups) == aut_graph(g).order


def test_restrict_is_homomorphism():
    g = K(3)
    cg = transform(g)
    ups = graph_auts(cg)
    for a in ups:
        for b in ups:
            assert restrict_aut(cg, a.compose(b)) == restrict_aut(cg, a).compose(
                restrict_aut(cg, b)
            )


def test_original_graph_roundtrip():
    g = K(3)
    assert original_graph(transform(g)) == g
    plain = greedy_star_coloring(g)
    with pytest.raises(NotFromTransform):
        original_graph(plain)


# -- star colorings -------------------------------------------------------------


def test_star_check_triangle_fails():
    g = K(3)
    colors = {e: 0 for e in g.edges}
    rep = check_star_coloring(ColoredGraph(g, colors, 1))
    assert not rep[0]["ok"]
    assert len(rep[0]["witness"]) == 3


def test_star_check_star_passes():
    center = "c"
    leaves = [f"l{i}" for i in range(5)]
    g = Graph([center] + leaves, [(center, x) for x in leaves])
    rep = check_star_coloring(ColoredGraph(g, {e: 0 for e in g.edges}, 1))
    assert rep[0]["ok"]


def test_greedy_star_coloring_valid():
    for g in (K(2), path(3), K(3), K(4)):
        cg = greedy_star_coloring(g)
        assert all(r["ok"] for r in check_star_coloring(cg).values())


# -- structures ------------------------------------------------------------------


def test_code_structure_pure_set():
    s = FiniteStructure(universe=("a", "b", "c"), relations={}, unary_functions={})
    g = code_structure(s)
    assert g.is_connected()
    assert aut_graph(g, max_vertices=200).order == 6 == len(s.automorphisms())


def test_code_structure_linear_order_rigid():
    s = FiniteStructure(
        universe=("a", "b"), relations={"lt": {("a", "b")}}, unary_functions={}
    )
    g = code_structure(s)
    assert g.is_connected()
    assert aut_graph(g, max_vertices=200).order == 1 == len(s.automorphisms())


def test_cayley_structure_z3():
    z3 = closure([Perm.from_cycles(3, [(0, 1, 2)])])
    s = cayley_structure(z3)
    assert len(s.automorphisms()) == 3
    g = code_structure(s)
    assert aut_graph(g, max_vertices=600).order == 3


def test_cayley_structure_trivial_and_z2():
    triv = closure([Perm.identity(1)])
    s = cayley_structure(triv)
    assert len(s.universe) == 1
    assert len(s.automorphisms()) == 1
    z2 = closure([Perm.from_cycles(2, [(0, 1)])])
    s2 = cayley_structure(z2)
    assert len(s2.automorphisms()) == 2
    assert aut_graph(code_structure(s2), max_vertices=300).order == 2


def test_cayley_structure_s3():
    s3 = closure([Perm.from_cycles(3, [(0, 1)]), Perm.from_cycles(3, [(0, 1, 2)])])
    s = cayley_structure(s3)
    assert len(s.universe) == 6
    assert len(s.automorphisms()) == 6


def test_code_structure_restriction_realizes_iso():
    # graph automorphisms restricted to the tagged universe vertices are
    # exactly the structure automorphisms
    s = FiniteStructure(("a", "b", "c"), {"cyc": {("a", "b"), ("b", "c"), ("c", "a")}}, {})
    g = code_structure(s)
    group = aut_graph(g, max_vertices=600)
    verts = group.points
    restricted = set()
    for p in group.elements:
        m = {}
        for i, v in enumerate(verts):
            if v.startswith("e:") and "." not in v:
                m[v[2:]] = verts[p(i)][2:]
        restricted.add(tuple(sorted(m.items())))
    structure_auts = {tuple(sorted(a.items())) for a in map(dict, s.automorphisms())}
    assert restricted == structure_auts


def test_code_structure_matches_structure_aut_on_corpus():
    corpus = [
        FiniteStructure(("a", "b", "c", "d"), {}, {}),
        FiniteStructure(("a", "b", "c"), {"r": {("a", "b")}}, {}),
        FiniteStructure(("a", "b", "c"), {"cyc": {("a", "b"), ("b", "c"), ("c", "a")}}, {}),
        FiniteStructure(("a", "b"), {}, {"f": {"a": "b", "b": "a"}}),
        FiniteStructure(("a", "b", "c"), {"loop": {("a",)}}, {}),
    ]
    for s in corpus:
        g = code_structure(s)
        assert g.is_connected()
        assert aut_graph(g, max_vertices=600).order == len(s.automorphisms())


# -- corpus enumeration ------------------------------------------------------------


def test_connected_graph_counts():
    # numbers of isomorphism types of connected graphs on n vertices
    assert [len(connected_graphs_up_to_iso(n)) for n in range(1, 6)] == [1, 1, 2, 6, 21]


# -- JSON ---------------------------------------------------------------------------


def test_graph_json_roundtrip():
    g = K(3)
    assert graph_from_json(graph_to_json(g)) == g
    cg = transform(K(2))
    doc = json.loads(graph_to_json(cg))
    assert set(doc) == {"vertices", "edges", "colors", "color_count"}
    back = graph_from_json(graph_to_json(cg))
    assert back.graph == cg.graph and back.colors == cg.colors


def test_structure_json_roundtrip():
    from graphfield.graphs import structure_from_json, structure_to_json

    s = FiniteStructure(
        ("a", "b"), {"r": {("a", "b")}}, {"f": {"a": "b", "b": "a"}}
    )
    back = structure_from_json(structure_to_json(s))
    assert back.universe == s.universe
    assert back.relations == {"r": {("a", "b")}}
    assert back.unary_functions == s.unary_functions
