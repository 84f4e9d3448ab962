"""Finite graphs, edge-colored graphs, their automorphism groups, the
edge-gadget transform with its 7-color star decomposition, and the coding
of finite structures as graphs.

Vertex labels are strings throughout; the transform tags its output
vertices inside the label ("1:x", "2:a|b:w") so the original graph and
the gadget copies stay recoverable.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .errors import BudgetExceeded, Disconnected, NotFromTransform
from .groups import Perm, PermGroup, closure, greedy_generators

DEFAULT_VERTEX_BOUND = 64
DEFAULT_AUT_NODE_BUDGET = 5_000_000


def _edge(a: str, b: str) -> frozenset:
    if a == b:
        raise ValueError(f"loop at {a!r}")
    return frozenset((a, b))


class Graph:
    """A finite simple graph with string vertex labels."""

    def __init__(self, vertices, edges):
        self.vertices = frozenset(vertices)
        es = set()
        for e in edges:
            pair = tuple(e)
            if len(pair) != 2:
                raise ValueError(f"edge {e!r} is not a 2-set")
            es.add(_edge(*pair))
        self.edges = frozenset(es)
        for e in self.edges:
            for v in e:
                if v not in self.vertices:
                    raise ValueError(f"edge endpoint {v!r} is not a declared vertex")
        for v in self.vertices:
            if not isinstance(v, str):
                raise ValueError(f"vertex label {v!r} must be a string")

    def neighbors(self, v: str) -> set:
        return {next(iter(e - {v})) for e in self.edges if v in e}

    def degree(self, v: str) -> int:
        return sum(1 for e in self.edges if v in e)

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        start = next(iter(self.vertices))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in self.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(self.vertices)

    def induced(self, vs) -> "Graph":
        vs = frozenset(vs)
        return Graph(vs, {e for e in self.edges if e <= vs})

    def __eq__(self, other):
        return isinstance(other, Graph) and self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"


class ColoredGraph:
    """A graph with a total edge coloring into color_count classes."""

    def __init__(self, graph: Graph, colors: dict, color_count: int):
        self.graph = graph
        self.colors = {frozenset(e): c for e, c in colors.items()}
        self.color_count = color_count
        if set(self.colors.keys()) != set(graph.edges):
            raise ValueError("coloring must assign exactly the edges of the graph")
        for c in self.colors.values():
            if not (0 <= c < color_count):
                raise ValueError(f"color {c} out of range 0..{color_count - 1}")

    @property
    def vertices(self):
        return self.graph.vertices

    @property
    def edges(self):
        return self.graph.edges

    def color_class(self, c: int) -> set:
        return {e for e, col in self.colors.items() if col == c}

    def __repr__(self):
        return f"ColoredGraph({len(self.vertices)} vertices, {len(self.edges)} edges, {self.color_count} colors)"


class GraphAut:
    """A vertex bijection that is an automorphism of a (colored) graph."""

    def __init__(self, mapping: dict):
        self.mapping = dict(mapping)
        if set(self.mapping.keys()) != set(self.mapping.values()):
            raise ValueError("mapping is not a bijection of the vertex set")

    def __call__(self, v: str) -> str:
        return self.mapping[v]

    def apply_edge(self, e: frozenset) -> frozenset:
        a, b = tuple(e)
        return _edge(self.mapping[a], self.mapping[b])

    def compose(self, other: "GraphAut") -> "GraphAut":
        # (self . other)(v) = self(other(v))
        return GraphAut({v: self.mapping[w] for v, w in other.mapping.items()})

    def inverse(self) -> "GraphAut":
        return GraphAut({w: v for v, w in self.mapping.items()})

    def is_identity(self) -> bool:
        return all(v == w for v, w in self.mapping.items())

    def is_automorphism_of(self, g) -> bool:
        graph, colors = _unwrap(g)
        if set(self.mapping.keys()) != set(graph.vertices):
            return False
        for e in graph.edges:
            img = self.apply_edge(e)
            if img not in graph.edges:
                return False
            if colors is not None and colors[img] != colors[e]:
                return False
        return True

    def __eq__(self, other):
        return isinstance(other, GraphAut) and self.mapping == other.mapping

    def __hash__(self):
        return hash(frozenset(self.mapping.items()))

    def __repr__(self):
        moved = {v: w for v, w in self.mapping.items() if v != w}
        return f"GraphAut({moved or 'id'})"


def _unwrap(g):
    if isinstance(g, ColoredGraph):
        return g.graph, g.colors
    return g, None


# ---------------------------------------------------------------------------
# Automorphism search
# ---------------------------------------------------------------------------


def aut_graph(
    g,
    node_budget: int = DEFAULT_AUT_NODE_BUDGET,
    max_vertices: int = DEFAULT_VERTEX_BOUND,
) -> PermGroup:
    """All automorphisms of a graph or colored graph, as a PermGroup on
    the sorted vertex list (color-preserving when colored).

    Backtracking over vertex images, pruned by an iterated neighborhood
    invariant; the found set is closed and re-verified before returning.
    """
    graph, colors = _unwrap(g)
    verts = sorted(graph.vertices)
    n = len(verts)
    if n > max_vertices:
        raise BudgetExceeded("aut_graph vertex bound", max_vertices)
    index = {v: i for i, v in enumerate(verts)}
    adj: list[dict[int, int]] = [{} for _ in range(n)]
    for e in graph.edges:
        a, b = tuple(e)
        c = colors[e] if colors is not None else 0
        adj[index[a]][index[b]] = c
        adj[index[b]][index[a]] = c

    inv = _refine([len(adj[i]) for i in range(n)], adj)
    order = sorted(range(n), key=lambda v: (sum(1 for u in range(n) if inv[u] == inv[v]), v))

    found: list[Perm] = []
    mapping = [-1] * n
    used = [False] * n
    budget = [node_budget]

    def consistent(v: int, u: int) -> bool:
        for w in order:
            mw = mapping[w]
            if mw < 0:
                continue
            cv = adj[v].get(w)
            cu = adj[u].get(mw)
            if cv != cu:
                return False
        return True

    def dfs(i: int):
        if i == n:
            found.append(Perm(mapping.copy()))
            return
        v = order[i]
        for u in range(n):
            if used[u] or inv[u] != inv[v]:
                continue
            budget[0] -= 1
            if budget[0] < 0:
                raise BudgetExceeded("aut_graph search nodes", node_budget)
            if not consistent(v, u):
                continue
            mapping[v] = u
            used[u] = True
            dfs(i + 1)
            mapping[v] = -1
            used[u] = False

    dfs(0)
    elements = set(found)
    gens = greedy_generators(elements, n)
    group = closure(gens, cap=len(elements) + 1, degree=n)
    if group.elements != frozenset(elements):
        raise AssertionError("automorphism set failed closure verification")  # pragma: no cover
    return PermGroup(n, gens, elements, points=verts)


def _refine(start: list, adj: list[dict[int, int]]) -> list[int]:
    """Iterated invariant refinement until the partition stabilizes."""
    n = len(start)
    table: dict = {}
    inv = []
    for x in start:
        inv.append(table.setdefault(x, len(table)))
    while True:
        sigs = []
        for v in range(n):
            sigs.append((inv[v], tuple(sorted((inv[u], c) for u, c in adj[v].items()))))
        table = {}
        new_inv = [table.setdefault(s, len(table)) for s in sigs]
        if new_inv == inv:
            return inv
        inv = new_inv


def graph_auts(g) -> list[GraphAut]:
    """aut_graph, converted to explicit vertex mappings."""
    group = aut_graph(g)
    verts = group.points
    out = []
    for p in group.sorted_elements():
        out.append(GraphAut({verts[i]: verts[p(i)] for i in range(len(verts))}))
    return out


def perm_to_graph_aut(group: PermGroup, p: Perm) -> GraphAut:
    return GraphAut({group.points[i]: group.points[p(i)] for i in range(group.degree)})


# ---------------------------------------------------------------------------
# The edge gadget and the transform
# ---------------------------------------------------------------------------

_GADGET_VERTICES = ("x", "y", "z", "a", "b", "c")
_GADGET_EDGES = (
    ("z", "x"),
    ("z", "y"),
    ("z", "a"),
    ("z", "b"),
    ("z", "c"),
    ("a", "b"),
    ("b", "c"),
    ("x", "c"),
    ("y", "c"),
)
# fixed order used to enumerate the edges of the gadget minus y
_GADGET_ORDER = {"x": 0, "z": 1, "a": 2, "b": 3, "c": 4}
_INTERNAL = ("z", "a", "b", "c")


def gadget() -> Graph:
    """The fixed 6-vertex auxiliary graph whose only symmetry swaps x and y."""
    return Graph(_GADGET_VERTICES, [_edge(*e) for e in _GADGET_EDGES])


def gadget_prime_edges() -> list[frozenset]:
    """Edges of the gadget with y removed, in the fixed enumeration order."""
    prime = [e for e in (_edge(*p) for p in _GADGET_EDGES) if "y" not in e]
    prime.sort(key=lambda e: tuple(sorted(_GADGET_ORDER[v] for v in e)))
    return prime


N_COLORS = len(gadget_prime_edges())  # 7


_SEP_CHARS = (":", "|")


def transform(g: Graph) -> ColoredGraph:
    """Replace every edge of a connected graph by a gadget copy and color
    the result by the induced map onto the gadget-minus-y edges.

    Output vertices: "1:x" for original vertices x and "2:s|t:w" for the
    gadget interior w in the copy over edge {s, t}.
    """
    if not g.vertices:
        raise Disconnected("transform needs a nonempty graph")
    if not g.is_connected():
        raise Disconnected("transform needs a connected graph")
    for v in g.vertices:
        if any(ch in v for ch in _SEP_CHARS):
            raise ValueError(f"vertex label {v!r} contains a reserved character")

    def orig(x: str) -> str:
        return f"1:{x}"

    def inner(e: frozenset, w: str) -> str:
        s, t = sorted(e)
        return f"2:{s}|{t}:{w}"

    vertices = {orig(x) for x in g.vertices}
    gadget_adj = {v: set() for v in _GADGET_VERTICES}
    for a, b in _GADGET_EDGES:
        gadget_adj[a].add(b)
        gadget_adj[b].add(a)

    prime = gadget_prime_edges()
    prime_index = {e: i for i, e in enumerate(prime)}

    edges = set()
    colors = {}
    for e in g.edges:
        for w in _INTERNAL:
            vertices.add(inner(e, w))
        # interior edges of this copy
        for w, w2 in combinations(_INTERNAL, 2):
            if w2 in gadget_adj[w]:
                ed = _edge(inner(e, w), inner(e, w2))
                edges.add(ed)
                colors[ed] = prime_index[_edge(w, w2)]
        # attachment edges: x's gadget neighbors are exactly z and c
        for x in e:
            for w in gadget_adj["x"]:
                ed = _edge(orig(x), inner(e, w))
                edges.add(ed)
                colors[ed] = prime_index[_edge("x", w)]
    return ColoredGraph(Graph(vertices, edges), colors, N_COLORS)


def _parse_transform_label(label: str):
    if label.startswith("1:"):
        return ("orig", label[2:])
    if label.startswith("2:"):
        rest = label[2:]
        pair, _, w = rest.rpartition(":")
        s, _, t = pair.partition("|")
        if w and s and t:
            return ("inner", _edge(s, t), w)
    return None


def original_graph(cg: ColoredGraph) -> Graph:
    """Recover the input graph from a transform output."""
    vertices = set()
    edges = set()
    for v in cg.vertices:
        parsed = _parse_transform_label(v)
        if parsed is None:
            raise NotFromTransform(f"vertex {v!r} lacks the transform tagging")
        if parsed[0] == "orig":
            vertices.add(parsed[1])
        else:
            edges.add(parsed[1])
    return Graph(vertices, edges)


def restrict_aut(cg: ColoredGraph, phi: GraphAut) -> GraphAut:
    """Restrict an automorphism of a transform output to the original graph."""
    gamma = original_graph(cg)
    mapping = {}
    for x in gamma.vertices:
        img = phi(f"1:{x}")
        parsed = _parse_transform_label(img)
        if parsed is None or parsed[0] != "orig":
            raise NotFromTransform("automorphism does not preserve the original-vertex tag class")
        mapping[x] = parsed[1]
    psi = GraphAut(mapping)
    if not psi.is_automorphism_of(gamma):
        raise AssertionError("restriction is not an automorphism")  # pragma: no cover
    return psi


def lift_aut(cg: ColoredGraph, psi: GraphAut) -> GraphAut:
    """The unique lift of an original-graph automorphism to the transform."""
    mapping = {}
    for v in cg.vertices:
        parsed = _parse_transform_label(v)
        if parsed is None:
            raise NotFromTransform(f"vertex {v!r} lacks the transform tagging")
        if parsed[0] == "orig":
            mapping[v] = f"1:{psi(parsed[1])}"
        else:
            _, e, w = parsed
            s, t = sorted(psi.apply_edge(e))
            mapping[v] = f"2:{s}|{t}:{w}"
    phi = GraphAut(mapping)
    if not phi.is_automorphism_of(cg.graph):
        raise AssertionError("lift is not an automorphism")  # pragma: no cover
    return phi


# ---------------------------------------------------------------------------
# Star colorings
# ---------------------------------------------------------------------------


def is_star(edges) -> bool:
    """A nonempty edge set is a star iff some vertex lies on every edge."""
    edges = list(edges)
    if len(edges) <= 1:
        return True
    common = set(edges[0])
    for e in edges[1:]:
        common &= e
        if not common:
            return False
    return True


def check_star_coloring(cg: ColoredGraph) -> dict:
    """Per color: is the induced subgraph a disjoint union of stars?

    Returns {color: {"ok": bool, "witness": [...] }}, with a failed
    component's edges as the witness.
    """
    report = {}
    for c in range(cg.color_count):
        class_edges = cg.color_class(c)
        ok = True
        witness = None
        for comp in _edge_components(class_edges):
            if not is_star(comp):
                ok = False
                witness = sorted(sorted(e) for e in comp)
                break
        report[c] = {"ok": ok, "witness": witness}
    return report


def _edge_components(edges) -> list[list[frozenset]]:
    edges = list(edges)
    parent: dict = {}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in edges:
        for v in e:
            parent.setdefault(v, v)
    for e in edges:
        a, b = tuple(e)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict = {}
    for e in edges:
        r = find(next(iter(e)))
        groups.setdefault(r, []).append(e)
    return list(groups.values())


def greedy_star_coloring(g: Graph) -> ColoredGraph:
    """A small star coloring: each edge takes the least color whose class
    stays a disjoint union of stars."""
    colors = {}
    classes: list[set] = []
    for e in sorted(g.edges, key=lambda e: sorted(e)):
        placed = False
        for c, cls in enumerate(classes):
            trial = cls | {e}
            if all(is_star(comp) for comp in _edge_components(trial)):
                cls.add(e)
                colors[e] = c
                placed = True
                break
        if not placed:
            classes.append({e})
            colors[e] = len(classes) - 1
    return ColoredGraph(g, colors, max(1, len(classes)))


# ---------------------------------------------------------------------------
# Finite structures and their graph codes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteStructure:
    """A finite universe with named relations and unary functions."""

    universe: tuple
    relations: dict
    unary_functions: dict

    def __post_init__(self):
        uni = set(self.universe)
        for name, tuples in self.relations.items():
            arities = {len(t) for t in tuples}
            if len(arities) > 1:
                raise ValueError(f"relation {name!r} has mixed arities")
            for t in tuples:
                if not t:
                    raise ValueError(f"relation {name!r} contains an empty tuple")
                for x in t:
                    if x not in uni:
                        raise ValueError(f"tuple entry {x!r} outside the universe")
        for name, fn in self.unary_functions.items():
            if set(fn.keys()) != uni or any(v not in uni for v in fn.values()):
                raise ValueError(f"function {name!r} is not a total map on the universe")

    def all_relations(self) -> list[tuple[str, list[tuple]]]:
        """Relations plus functions-as-binary-relations, sorted by name."""
        items = [(f"R.{n}", sorted(ts)) for n, ts in self.relations.items()]
        items += [
            (f"F.{n}", sorted((x, fn[x]) for x in fn))
            for n, fn in self.unary_functions.items()
        ]
        return sorted(items)

    def automorphisms(self) -> list[dict]:
        """Brute-force structure automorphisms (universe permutations)."""
        from itertools import permutations

        uni = list(self.universe)
        rels = self.all_relations()
        out = []
        for img in permutations(uni):
            m = dict(zip(uni, img))
            ok = True
            for _, tuples in rels:
                tset = set(tuples)
                if any(tuple(m[x] for x in t) not in tset for t in tuples):
                    ok = False
                    break
            if ok:
                out.append(m)
        return out


def _pendant_path(vertices: set, edges: set, base: str, prefix: str, length: int):
    prev = base
    for i in range(1, length + 1):
        v = f"{prefix}.{i}"
        vertices.add(v)
        edges.add(_edge(prev, v))
        prev = v


def code_structure(s: FiniteStructure) -> Graph:
    """A connected graph whose automorphism group is Aut(s).

    Universe elements become vertices joined to an apex; each relation
    tuple gets a spine path whose vertices point at the tuple entries.
    Pendant paths of pairwise distinct lengths tag the apex (2), the
    universe vertices (3), the tuple positions (5, 7, 9, ...) and the
    relation names (6, 8, 10, ...), so no tag class can map to another.
    (The apex tag must stay shorter than a universe vertex plus its tag,
    or the whole branch could trade places with it.)
    """
    vertices: set = set()
    edges: set = set()

    def uvert(x) -> str:
        return f"e:{x}"

    apex = "apex"
    vertices.add(apex)
    _pendant_path(vertices, edges, apex, "apex.t", 2)
    for x in s.universe:
        vertices.add(uvert(x))
        edges.add(_edge(apex, uvert(x)))
        _pendant_path(vertices, edges, uvert(x), f"{uvert(x)}.t", 3)

    for j, (name, tuples) in enumerate(s.all_relations()):
        rel_tag = 6 + 2 * j
        for t_idx, tup in enumerate(tuples):
            spine = [f"r{j}.{t_idx}.s{i}" for i in range(len(tup))]
            vertices.update(spine)
            for i in range(len(spine) - 1):
                edges.add(_edge(spine[i], spine[i + 1]))
            for i, x in enumerate(tup):
                edges.add(_edge(spine[i], uvert(x)))
                _pendant_path(vertices, edges, spine[i], f"{spine[i]}.p", 5 + 2 * i)
            _pendant_path(vertices, edges, spine[0], f"r{j}.{t_idx}.rt", rel_tag)

    return Graph(vertices, edges)


def cayley_structure(group: PermGroup) -> FiniteStructure:
    """The right-translation structure of a finite group: one unary
    function per element g sending x to x*g."""
    elems = group.sorted_elements()
    index = {x: i for i, x in enumerate(elems)}
    universe = tuple(f"g{i}" for i in range(len(elems)))
    functions = {}
    for i, g in enumerate(elems):
        functions[f"m{i}"] = {f"g{j}": f"g{index[x * g]}" for j, x in enumerate(elems)}
    return FiniteStructure(universe=universe, relations={}, unary_functions=functions)


# ---------------------------------------------------------------------------
# Graph corpus enumeration (used by acceptance checks)
# ---------------------------------------------------------------------------


def connected_graphs_up_to_iso(n: int) -> list[Graph]:
    """All isomorphism types of connected graphs on exactly n vertices."""
    labels = [f"v{i}" for i in range(n)]
    pairs = list(combinations(range(n), 2))
    reps_by_inv: dict = {}
    out: list[Graph] = []
    for mask in range(1 << len(pairs)):
        adj = [set() for _ in range(n)]
        for bit, (i, j) in enumerate(pairs):
            if mask >> bit & 1:
                adj[i].add(j)
                adj[j].add(i)
        if not _connected_adj(adj):
            continue
        inv = _graph_invariant(adj)
        bucket = reps_by_inv.setdefault(inv, [])
        if any(_adj_isomorphic(adj, other) for other in bucket):
            continue
        bucket.append(adj)
        out.append(
            Graph(labels, [_edge(labels[i], labels[j]) for i in range(n) for j in adj[i] if i < j])
        )
    return out


def _connected_adj(adj) -> bool:
    n = len(adj)
    if n == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


def _graph_invariant(adj):
    n = len(adj)
    degs = sorted(len(a) for a in adj)
    neigh = sorted(tuple(sorted(len(adj[u]) for u in adj[v])) for v in range(n))
    tri = sorted(
        sum(1 for u in adj[v] for w in adj[v] if u < w and w in adj[u]) for v in range(n)
    )
    return (n, tuple(degs), tuple(neigh), tuple(tri))


def _adj_isomorphic(a, b) -> bool:
    n = len(a)
    mapping = [-1] * n
    used = [False] * n
    order = sorted(range(n), key=lambda v: -len(a[v]))

    def dfs(i):
        if i == n:
            return True
        v = order[i]
        for u in range(n):
            if used[u] or len(b[u]) != len(a[v]):
                continue
            ok = True
            for w in order[:i]:
                if (w in a[v]) != (mapping[w] in b[u]):
                    ok = False
                    break
            if ok:
                mapping[v] = u
                used[u] = True
                if dfs(i + 1):
                    return True
                mapping[v] = -1
                used[u] = False
        return False

    return dfs(0)


# ---------------------------------------------------------------------------
# JSON interfaces
# ---------------------------------------------------------------------------


def _edge_key(e: frozenset) -> str:
    return ",".join(sorted(e))


def graph_to_json(g, pretty: bool = False) -> str:
    graph, colors = _unwrap(g)
    doc: dict = {
        "vertices": sorted(graph.vertices),
        "edges": sorted(sorted(e) for e in graph.edges),
    }
    if colors is not None:
        doc["colors"] = {_edge_key(e): c for e, c in sorted(colors.items(), key=lambda kv: _edge_key(kv[0]))}
        doc["color_count"] = g.color_count
    return json.dumps(doc, indent=2 if pretty else None, sort_keys=True)


def graph_from_json(text: str):
    doc = json.loads(text)
    graph = Graph(doc["vertices"], [tuple(e) for e in doc["edges"]])
    if "colors" in doc:
        colors = {frozenset(k.split(",")): v for k, v in doc["colors"].items()}
        count = doc.get("color_count", (max(colors.values()) + 1) if colors else 1)
        return ColoredGraph(graph, colors, count)
    return graph


def structure_to_json(s: FiniteStructure, pretty: bool = False) -> str:
    doc = {
        "universe": list(s.universe),
        "relations": {n: sorted(list(t) for t in ts) for n, ts in s.relations.items()},
        "functions": {n: dict(sorted(fn.items())) for n, fn in s.unary_functions.items()},
    }
    return json.dumps(doc, indent=2 if pretty else None, sort_keys=True)


def structure_from_json(text: str) -> FiniteStructure:
    doc = json.loads(text)
    return FiniteStructure(
        universe=tuple(doc["universe"]),
        relations={n: {tuple(t) for t in ts} for n, ts in doc.get("relations", {}).items()},
        unary_functions={n: dict(fn) for n, fn in doc.get("functions", {}).items()},
    )
