"""Finite permutation groups: closures, normalizers, automorphism groups,
automorphism/normalizer towers, PSL/PGL/PGammaL over small fields, and
semidirect products.

Groups are always materialized as explicit element sets; subgroup
equality is element-set equality.  Everything here is exhaustive search
tuned only as far as desk scale requires.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    BudgetExceeded,
    NotAnAction,
    NotCenterless,
    NotPrimePower,
    NotSubgroup,
)

DEFAULT_CLOSURE_CAP = 20000
DEFAULT_AUT_CAP = 1000
DEFAULT_AUT_NODE_BUDGET = 2_000_000


class Perm:
    """A permutation of {0, ..., n-1}, stored as its image tuple.

    Composition is right-to-left: (p * q)(x) = p(q(x)).
    """

    __slots__ = ("images", "_hash")

    def __init__(self, images):
        self.images = tuple(images)
        self._hash = hash(self.images)

    @staticmethod
    def identity(n: int) -> "Perm":
        return Perm(range(n))

    @staticmethod
    def from_cycles(n: int, cycles) -> "Perm":
        images = list(range(n))
        for cyc in cycles:
            for i, x in enumerate(cyc):
                images[x] = cyc[(i + 1) % len(cyc)]
        return Perm(images)

    def to_cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                seen.add(start)
                continue
            cyc = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        img = self.images
        return Perm([img[x] for x in other.images])

    def inv(self) -> "Perm":
        out = [0] * len(self.images)
        for i, x in enumerate(self.images):
            out[x] = i
        return Perm(out)

    def __pow__(self, n: int) -> "Perm":
        if n < 0:
            return self.inv() ** (-n)
        acc = Perm.identity(self.degree)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.to_cycles())) if self.to_cycles() else 1

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Perm"):
        return self.images < other.images

    def __repr__(self):
        cycles = self.to_cycles()
        if not cycles:
            return "Perm(id)"
        return "Perm(" + "".join("(" + " ".join(map(str, c)) + ")" for c in cycles) + ")"

    def to_json(self) -> list[int]:
        return list(self.images)


class PermGroup:
    """A materialized permutation group.

    `points` optionally carries labels for the permuted domain (e.g.
    graph vertices or group-element indices); it is cosmetic.
    """

    def __init__(self, degree: int, generators, elements, points=None):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = frozenset(elements)
        self.points = tuple(points) if points is not None else None

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Perm) -> bool:
        return p in self.elements

    def contains_group(self, other: "PermGroup") -> bool:
        return other.elements <= self.elements

    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def is_abelian(self) -> bool:
        gens = self.generators or tuple(self.elements)
        return all(a * b == b * a for a in gens for b in gens)

    def is_trivial(self) -> bool:
        return self.order == 1

    def sorted_elements(self) -> list[Perm]:
        return sorted(self.elements)

    def __eq__(self, other):
        return (
            isinstance(other, PermGroup)
            and self.degree == other.degree
            and self.elements == other.elements
        )

    def __hash__(self):
        return hash((self.degree, self.elements))

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"


def closure(gens, cap: int = DEFAULT_CLOSURE_CAP, degree: int | None = None) -> PermGroup:
    """Materialize the group generated by `gens` by breadth-first products."""
    gens = list(gens)
    if degree is None:
        if not gens:
            raise ValueError("need a degree for the trivial group")
        degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise ValueError("generators of mixed degree")
    ident = Perm.identity(degree)
    elements = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in elements:
                    if len(elements) >= cap:
                        raise BudgetExceeded("group closure", cap)
                    elements.add(y)
                    nxt.append(y)
        frontier = nxt
    return PermGroup(degree, gens, elements)


def greedy_generators(elements, degree: int) -> list[Perm]:
    """A small (not minimal) generating set for a materialized group."""
    target = set(elements)
    gens: list[Perm] = []
    have = {Perm.identity(degree)}
    for x in sorted(target, key=lambda p: (-p.order(), p.images)):
        if x in have:
            continue
        gens.append(x)
        have = set(closure(gens, cap=len(target) + 1, degree=degree).elements)
        if len(have) == len(target):
            break
    return gens or [Perm.identity(degree)]


def subgroup(G: PermGroup, elements) -> PermGroup:
    elements = frozenset(elements)
    gens = greedy_generators(elements, G.degree)
    return PermGroup(G.degree, gens, elements, points=G.points)


def normalizer(G: PermGroup, H: PermGroup) -> PermGroup:
    """{g in G : g H g^-1 = H}."""
    if not G.contains_group(H):
        raise NotSubgroup("H is not a subgroup of G")
    hgens = greedy_generators(H.elements, H.degree)
    out = set()
    for g in G.elements:
        ginv = g.inv()
        if all((g * h * ginv) in H.elements for h in hgens):
            out.add(g)
    return subgroup(G, out)


def centralizer(G: PermGroup, S) -> PermGroup:
    """Elements of G commuting with every element of S."""
    if isinstance(S, PermGroup):
        S = greedy_generators(S.elements, S.degree)
    S = list(S)
    out = {g for g in G.elements if all(g * s == s * g for s in S)}
    return subgroup(G, out)


def center(G: PermGroup) -> PermGroup:
    return centralizer(G, G)


def conjugacy_classes(G: PermGroup) -> list[frozenset]:
    gens = G.generators or greedy_generators(G.elements, G.degree)
    gen_invs = [(g, g.inv()) for g in gens]
    seen = set()
    classes = []
    for x in G.sorted_elements():
        if x in seen:
            continue
        orbit = {x}
        queue = [x]
        while queue:
            y = queue.pop()
            for g, gi in gen_invs:
                z = g * y * gi
                if z not in orbit:
                    orbit.add(z)
                    queue.append(z)
        seen |= orbit
        classes.append(frozenset(orbit))
    return classes


def normal_closure(G: PermGroup, seed_elements) -> PermGroup:
    """Smallest normal subgroup of G containing the seed elements."""
    gens = G.generators or greedy_generators(G.elements, G.degree)
    gen_invs = [(g, g.inv()) for g in gens]
    conj_gens = set()
    for x in seed_elements:
        orbit = {x}
        queue = [x]
        while queue:
            y = queue.pop()
            for g, gi in gen_invs:
                z = g * y * gi
                if z not in orbit:
                    orbit.add(z)
                    queue.append(z)
        conj_gens |= orbit
    return closure(sorted(conj_gens), cap=G.order + 1, degree=G.degree)


def is_simple(G: PermGroup) -> bool:
    """Exhaustive: no single nontrivial element has a proper normal closure."""
    if G.order == 1:
        return False
    ident = G.identity()
    for cls in conjugacy_classes(G):
        rep = next(iter(cls))
        if rep == ident:
            continue
        if normal_closure(G, [rep]).order != G.order:
            return False
    return True


# ---------------------------------------------------------------------------
# Automorphism groups of abstract finite groups
# ---------------------------------------------------------------------------


@dataclass
class AutGroup:
    """Aut(G) realized on the sorted element list of G.

    `domain` is the sorted element list; automorphisms are permutations
    of its indices.  `inner` maps each g in G to conjugation-by-g as such
    an index permutation.
    """

    group: PermGroup
    domain: tuple
    index: dict
    inner: dict

    def as_index_perm(self, mapping: dict) -> Perm:
        return Perm([self.index[mapping[x]] for x in self.domain])


def _element_invariants(G: PermGroup):
    classes = conjugacy_classes(G)
    inv = {}
    for cls in classes:
        size = len(cls)
        for x in cls:
            inv[x] = (x.order(), size)
    return inv


def _choose_generators(G: PermGroup, invariants) -> list[Perm]:
    """A small generating set biased toward elements with rare invariants,
    preferring a 2-element set when one exists."""
    if G.order == 1:
        return [G.identity()]
    domain = G.sorted_elements()
    pool_size = {}
    for x in domain:
        pool_size[invariants[x]] = pool_size.get(invariants[x], 0) + 1
    by_rarity = sorted(
        (x for x in domain if not x.is_identity()),
        key=lambda x: (pool_size[invariants[x]], x.images),
    )
    g1 = by_rarity[0]
    have = closure([g1], cap=G.order + 1, degree=G.degree)
    if have.order == G.order:
        return [g1]
    for x in by_rarity:
        if x in have.elements:
            continue
        if closure([g1, x], cap=G.order + 1, degree=G.degree).order == G.order:
            return [g1, x]
    gens = [g1]
    for x in by_rarity:
        if x in have.elements:
            continue
        gens.append(x)
        have = closure(gens, cap=G.order + 1, degree=G.degree)
        if have.order == G.order:
            return gens
    return gens


def _pair_invariants_match(gens, chosen, inv_G, inv_H) -> bool:
    """Cheap necessary condition before the full homomorphism rebuild:
    products of generator pairs must land in matching classes."""
    k = len(gens)
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            if inv_G[gens[i] * gens[j]] != inv_H[chosen[i] * chosen[j]]:
                return False
    return True


def _hom_from_generator_images(G: PermGroup, gens, images, budget_counter) -> dict | None:
    """Extend gens -> images to a homomorphism on all of G, or None.

    Elements are reached breadth-first by right-multiplying with
    generators; any inconsistency between two derivations kills the
    candidate immediately.
    """
    ident = G.identity()
    phi = {ident: ident}
    queue = [ident]
    pairs = list(zip(gens, images))
    while queue:
        nxt = []
        for x in queue:
            fx = phi[x]
            for g, h in pairs:
                budget_counter[0] -= 1
                if budget_counter[0] < 0:
                    raise BudgetExceeded("automorphism search", budget_counter[1])
                y = x * g
                fy = fx * h
                known = phi.get(y)
                if known is None:
                    phi[y] = fy
                    nxt.append(y)
                elif known != fy:
                    return None
        queue = nxt
    if len(phi) != G.order:
        return None  # gens failed to generate (should not happen)
    if len(set(phi.values())) != G.order:
        return None  # not bijective: image is a proper subgroup
    if any(v not in G.elements for v in phi.values()):
        return None
    return phi


def aut_group(
    G: PermGroup,
    cap: int = DEFAULT_AUT_CAP,
    node_budget: int = DEFAULT_AUT_NODE_BUDGET,
) -> AutGroup:
    """All automorphisms of G, found by backtracking over generator images.

    Candidate images are restricted to elements with the same order and
    conjugacy-class size as the generator; each candidate tuple is
    validated by rebuilding the whole multiplication graph.
    """
    if G.order > cap:
        raise BudgetExceeded("aut_group element cap", cap)
    domain = tuple(G.sorted_elements())
    index = {x: i for i, x in enumerate(domain)}
    invariants = _element_invariants(G)
    gens = _choose_generators(G, invariants)
    candidate_pools = [
        [y for y in domain if invariants.get(y, (1, 1)) == invariants.get(g, (1, 1))]
        for g in gens
    ]
    budget_counter = [node_budget, node_budget]
    autos: list[dict] = []

    def backtrack(i: int, chosen: list[Perm]):
        if i == len(gens):
            if not _pair_invariants_match(gens, chosen, invariants, invariants):
                return
            phi = _hom_from_generator_images(G, gens, chosen, budget_counter)
            if phi is not None:
                autos.append(phi)
            return
        for y in candidate_pools[i]:
            chosen.append(y)
            backtrack(i + 1, chosen)
            chosen.pop()

    backtrack(0, [])

    aut_perms = {Perm([index[phi[x]] for x in domain]) for phi in autos}
    aut_gens = greedy_generators(aut_perms, len(domain))
    group = closure(aut_gens, cap=len(aut_perms) + 1, degree=len(domain))
    if group.elements != frozenset(aut_perms):
        raise AssertionError("automorphism set is not closed")  # pragma: no cover
    inner = {}
    for g in domain:
        gi = g.inv()
        inner[g] = Perm([index[g * x * gi] for x in domain])
    return AutGroup(group=group, domain=domain, index=index, inner=inner)


def find_isomorphism(G: PermGroup, H: PermGroup, node_budget: int = DEFAULT_AUT_NODE_BUDGET):
    """An explicit isomorphism G -> H as a dict, or None.

    Same backtracking as aut_group, with images taken in H.
    """
    if G.order != H.order:
        return None
    inv_G = _element_invariants(G)
    inv_H = _element_invariants(H)
    gens = _choose_generators(G, inv_G)
    pools = [[y for y in H.sorted_elements() if inv_H[y] == inv_G[g]] for g in gens]
    budget_counter = [node_budget, node_budget]

    result: list[dict | None] = [None]

    def backtrack(i: int, chosen: list[Perm]):
        if result[0] is not None:
            return
        if i == len(gens):
            if not _pair_invariants_match(gens, chosen, inv_G, inv_H):
                return
            phi = _hom_between(G, H, gens, chosen, budget_counter)
            if phi is not None:
                result[0] = phi
            return
        for y in pools[i]:
            chosen.append(y)
            backtrack(i + 1, chosen)
            chosen.pop()

    backtrack(0, [])
    return result[0]


def _hom_between(G, H, gens, images, budget_counter) -> dict | None:
    phi = {G.identity(): H.identity()}
    queue = [G.identity()]
    pairs = list(zip(gens, images))
    while queue:
        nxt = []
        for x in queue:
            fx = phi[x]
            for g, h in pairs:
                budget_counter[0] -= 1
                if budget_counter[0] < 0:
                    raise BudgetExceeded("isomorphism search", budget_counter[1])
                y = x * g
                fy = fx * h
                known = phi.get(y)
                if known is None:
                    phi[y] = fy
                    nxt.append(y)
                elif known != fy:
                    return None
        queue = nxt
    if len(phi) != G.order or len(set(phi.values())) != H.order:
        return None
    if any(v not in H.elements for v in phi.values()):
        return None
    return phi


# ---------------------------------------------------------------------------
# Towers
# ---------------------------------------------------------------------------


@dataclass
class TowerReport:
    """A stabilized (or budget-cut) tower.

    chain_orders includes the repeated fixpoint entry, so the last two
    orders are equal iff `stabilized`.  For normalizer towers the actual
    subgroups are kept; for automorphism towers the stage groups are.
    """

    kind: str
    chain_orders: list[int]
    tau: int | None
    stabilized: bool
    stages: list[PermGroup] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "stages": [
                {"stage": i, "order": o, "stabilized": self.stabilized and i >= len(self.chain_orders) - 2}
                for i, o in enumerate(self.chain_orders)
            ],
            "tau": self.tau,
            "stabilized": self.stabilized,
        }


def normalizer_tower(G: PermGroup, H: PermGroup, max_steps: int = 10) -> TowerReport:
    """Iterate H -> N_G(H) until it stabilizes."""
    if not G.contains_group(H):
        raise NotSubgroup("H is not a subgroup of G")
    chain = [H]
    for _ in range(max_steps):
        nxt = normalizer(G, chain[-1])
        chain.append(nxt)
        if nxt.elements == chain[-2].elements:
            return TowerReport(
                kind="normalizer",
                chain_orders=[g.order for g in chain],
                tau=len(chain) - 2,
                stabilized=True,
                stages=chain,
            )
    raise BudgetExceeded("normalizer tower steps", max_steps)


def automorphism_tower(G: PermGroup, max_steps: int = 10, cap: int = DEFAULT_AUT_CAP) -> TowerReport:
    """Iterate G -> Aut(G) with the inner embedding until Aut = Inn."""
    if center(G).order != 1:
        raise NotCenterless("automorphism towers need a centerless base group")
    stages = [G]
    orders = [G.order]
    for step in range(max_steps):
        A = aut_group(stages[-1], cap=cap)
        orders.append(A.group.order)
        if A.group.order == stages[-1].order:
            # Inn has index 1, so Aut = Inn and the tower is done
            stages.append(A.group)
            return TowerReport(
                kind="automorphism",
                chain_orders=orders,
                tau=step,
                stabilized=True,
                stages=stages,
            )
        stages.append(A.group)
    raise BudgetExceeded("automorphism tower steps", max_steps)


# ---------------------------------------------------------------------------
# Small finite fields and projective groups
# ---------------------------------------------------------------------------

# fixed irreducible moduli (coefficients low-to-high, monic) for q = p^k, k > 1
_MODULI = {
    4: (2, (1, 1, 1)),
    8: (2, (1, 1, 0, 1)),
    9: (3, (2, 2, 1)),
    16: (2, (1, 1, 0, 0, 1)),
}

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13)


class GFq:
    """Arithmetic in GF(q) for q <= 16, with a fixed hard-coded modulus.

    Elements are coefficient tuples of length k (low degree first).
    """

    def __init__(self, q: int):
        p, k = _prime_power(q)
        if p is None or q > 16:
            raise NotPrimePower(f"q = {q} is not a supported prime power")
        self.q = q
        self.p = p
        self.k = k
        if k == 1:
            self.modulus = (0, 1)
        else:
            self.modulus = _MODULI[q][1]
            assert self._modulus_irreducible(), f"modulus for GF({q}) must be irreducible"

    def elements(self) -> list[tuple]:
        coords = [tuple()]
        for _ in range(self.k):
            coords = [c + (a,) for c in coords for a in range(self.p)]
        # low coefficient varies fastest; sort for a stable canonical order
        return sorted(coords)

    @property
    def zero(self):
        return (0,) * self.k

    @property
    def one(self):
        return (1,) + (0,) * (self.k - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # reduce modulo the monic modulus
        m = self.modulus
        for d in range(len(prod) - 1, k - 1, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                for i in range(len(m) - 1):
                    prod[d - self.k + i] = (prod[d - self.k + i] - c * m[i]) % p
        return tuple(prod[:k])

    def pow(self, a, n: int):
        acc = self.one
        base = a
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            n >>= 1
        return acc

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero in GF(q)")
        return self.pow(a, self.q - 2)

    def frob(self, a):
        return self.pow(a, self.p)

    def is_zero(self, a) -> bool:
        return a == self.zero

    def _modulus_irreducible(self) -> bool:
        # brute force: no monic divisor of degree 1..k-1
        p, k, m = self.p, self.k, self.modulus

        def polmulmod(a, b):
            prod = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
            return prod

        def divides(d):
            # trial division of m by d over F_p
            rem = list(m)
            while len(rem) >= len(d) and any(rem):
                while rem and rem[-1] == 0:
                    rem.pop()
                if len(rem) < len(d):
                    break
                c = rem[-1] * pow(d[-1], -1, p) % p
                shift = len(rem) - len(d)
                for i, x in enumerate(d):
                    rem[shift + i] = (rem[shift + i] - c * x) % p
            return not any(rem)

        for deg in range(1, k):
            coords = [[a] for a in range(p)]
            for _ in range(deg - 1):
                coords = [c + [a] for c in coords for a in range(p)]
            for low in coords:
                if divides(low + [1]):
                    return False
        return True


def _prime_power(q: int):
    for p in _SMALL_PRIMES:
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            return (p, k) if m == 1 else (None, None)
    return (None, None)


def _projective_points(F: GFq) -> list[tuple]:
    return [(F.one, F.zero)] + [(x, F.one) for x in F.elements()]


def _normalize_point(F: GFq, u, v):
    if not F.is_zero(v):
        return (F.mul(u, F.inv(v)), F.one)
    return (F.one, F.zero)


def _matrix_to_perm(F: GFq, points, point_index, mat) -> Perm:
    a, b, c, d = mat
    out = []
    for (u, v) in points:
        nu = F.add(F.mul(a, u), F.mul(b, v))
        nv = F.add(F.mul(c, u), F.mul(d, v))
        out.append(point_index[_normalize_point(F, nu, nv)])
    return Perm(out)


def _projective_group(q: int, det_one: bool) -> PermGroup:
    F = GFq(q)
    points = _projective_points(F)
    point_index = {pt: i for i, pt in enumerate(points)}
    perms = set()
    elems = F.elements()
    for a in elems:
        for b in elems:
            for c in elems:
                for d in elems:
                    det = F.sub(F.mul(a, d), F.mul(b, c))
                    if F.is_zero(det):
                        continue
                    if det_one and det != F.one:
                        continue
                    perms.add(_matrix_to_perm(F, points, point_index, (a, b, c, d)))
    gens = greedy_generators(perms, len(points))
    return PermGroup(len(points), gens, perms, points=[str(pt) for pt in points])


def psl2(q: int) -> PermGroup:
    """PSL(2, q) as permutations of the q+1 projective points."""
    G = _projective_group(q, det_one=True)
    expected = q * (q * q - 1) // math.gcd(2, q - 1)
    assert G.order == expected, f"|PSL(2,{q})| = {G.order}, expected {expected}"
    return G


def pgl2(q: int) -> PermGroup:
    G = _projective_group(q, det_one=False)
    expected = q * (q * q - 1)
    assert G.order == expected, f"|PGL(2,{q})| = {G.order}, expected {expected}"
    return G


def frobenius_point_perm(q: int) -> Perm:
    """The p-power Frobenius acting on the projective line of GF(q)."""
    F = GFq(q)
    points = _projective_points(F)
    point_index = {pt: i for i, pt in enumerate(points)}
    out = []
    for (u, v) in points:
        out.append(point_index[_normalize_point(F, F.frob(u), F.frob(v))])
    return Perm(out)


def pgammal2(q: int) -> PermGroup:
    """PGL(2, q) extended by the Frobenius field automorphisms."""
    pgl = pgl2(q)
    fr = frobenius_point_perm(q)
    F = GFq(q)
    elements = set()
    f_power = Perm.identity(pgl.degree)
    for _ in range(F.k):
        elements |= {g * f_power for g in pgl.elements}
        f_power = f_power * fr
    expected = pgl.order * F.k
    assert len(elements) == expected, f"|PGammaL(2,{q})| = {len(elements)}, expected {expected}"
    gens = list(pgl.generators) + [fr]
    return PermGroup(pgl.degree, gens, elements, points=pgl.points)


# ---------------------------------------------------------------------------
# Semidirect products
# ---------------------------------------------------------------------------


@dataclass
class Semidirect:
    group: PermGroup
    n_embed: dict
    h_embed: dict


def semidirect(N: PermGroup, H: PermGroup, action: dict) -> Semidirect:
    """N x| H for a verified action H -> Aut(N).

    `action` maps each element of H to a dict sending each element of N
    to its image.  The product acts faithfully on (N elements) x (H
    points).
    """
    _verify_action(N, H, action)
    n_elems = N.sorted_elements()
    n_index = {x: i for i, x in enumerate(n_elems)}
    deg_h = H.degree
    degree = len(n_elems) * deg_h

    def pair_perm(n: Perm, h: Perm) -> Perm:
        alpha = action[h]
        out = [0] * degree
        for i, m in enumerate(n_elems):
            nm = n * alpha[m]
            base = n_index[nm] * deg_h
            for x in range(deg_h):
                out[i * deg_h + x] = base + h(x)
        return Perm(out)

    elements = {pair_perm(n, h) for n in N.elements for h in H.elements}
    if len(elements) != N.order * H.order:
        raise NotAnAction("semidirect product collapsed; action is not faithful enough")
    gens = greedy_generators(elements, degree)
    group = PermGroup(degree, gens, elements)
    n_embed = {n: pair_perm(n, H.identity()) for n in N.elements}
    h_embed = {h: pair_perm(N.identity(), h) for h in H.elements}
    return Semidirect(group=group, n_embed=n_embed, h_embed=h_embed)


def trivial_action(N: PermGroup, H: PermGroup) -> dict:
    ident = {n: n for n in N.elements}
    return {h: dict(ident) for h in H.elements}


def conjugation_action(N: PermGroup, H: PermGroup) -> dict:
    """Action by conjugation when N and H sit in a common symmetric group."""
    if N.degree != H.degree:
        raise NotAnAction("conjugation action needs equal degrees")
    out = {}
    for h in H.elements:
        hi = h.inv()
        mapping = {}
        for n in N.elements:
            img = h * n * hi
            if img not in N.elements:
                raise NotAnAction("H does not normalize N")
            mapping[n] = img
        out[h] = mapping
    return out


def _verify_action(N: PermGroup, H: PermGroup, action: dict):
    if set(action.keys()) != set(H.elements):
        raise NotAnAction("action must be defined on every element of H")
    for h, alpha in action.items():
        if set(alpha.keys()) != set(N.elements):
            raise NotAnAction("each automorphism must be defined on all of N")
        if set(alpha.values()) != set(N.elements):
            raise NotAnAction("action images must be bijections of N")
    # homomorphism property of each alpha_h, checked on generator pairs
    n_gens = greedy_generators(N.elements, N.degree)
    for h, alpha in action.items():
        for a in n_gens:
            for b in N.elements:
                if alpha[a * b] != alpha[a] * alpha[b]:
                    raise NotAnAction("alpha_h is not a homomorphism of N")
    # compatibility alpha_{h1 h2} = alpha_{h1} o alpha_{h2}
    for h1 in H.elements:
        for h2 in H.elements:
            a12 = action[h1 * h2]
            a1 = action[h1]
            a2 = action[h2]
            for n in n_gens:
                if a12[n] != a1[a2[n]]:
                    raise NotAnAction("action is not a homomorphism H -> Aut(N)")


# ---------------------------------------------------------------------------
# Verification reports for the tower correspondences
# ---------------------------------------------------------------------------


def verify_simple_tower(S: PermGroup, middle: str = "inn", max_steps: int = 6) -> dict:
    """Compare the automorphism tower of G with the normalizer tower of G
    inside Aut(S), for Inn(S) <= G <= Aut(S).

    Returns a report with stagewise orders and explicit stage
    isomorphisms (as witness dictionaries).
    """
    if not is_simple(S) or S.is_abelian():
        raise ValueError("S must be simple and non-abelian")
    A = aut_group(S)
    aut_s = A.group
    inn_elems = frozenset(A.inner[g] for g in S.elements)
    inn = subgroup(aut_s, inn_elems)
    if middle == "inn":
        G = inn
    elif middle == "aut":
        G = aut_s
    else:
        raise ValueError("middle must be 'inn' or 'aut'")

    aut_tower = automorphism_tower(G, max_steps=max_steps)
    nor_tower = normalizer_tower(aut_s, G, max_steps=max_steps)

    stage_checks = []
    n = min(len(aut_tower.stages), len(nor_tower.stages))
    for i in range(n):
        left = aut_tower.stages[i]
        right = nor_tower.stages[i]
        ok_order = left.order == right.order
        iso = find_isomorphism(left, right) if ok_order else None
        stage_checks.append(
            {"stage": i, "aut_order": left.order, "nor_order": right.order,
             "orders_match": ok_order, "isomorphic": iso is not None}
        )
    return {
        "tau_aut": aut_tower.tau,
        "tau_nor": nor_tower.tau,
        "tau_match": aut_tower.tau == nor_tower.tau,
        "stages": stage_checks,
        "pass": aut_tower.tau == nor_tower.tau
        and all(c["orders_match"] and c["isomorphic"] for c in stage_checks),
    }


def verify_van_der_waerden(q: int, node_budget: int = DEFAULT_AUT_NODE_BUDGET) -> dict:
    """Check Aut(PSL(2,q)) = PGammaL(2,q) acting by conjugation, with a
    trivial centralizer witnessing uniqueness."""
    psl = psl2(q)
    pgamma = pgammal2(q)
    A = aut_group(psl, cap=max(DEFAULT_AUT_CAP, psl.order), node_budget=node_budget)

    domain = A.domain
    index = A.index
    conj_perms = set()
    kernel = []
    for gamma in pgamma.elements:
        gi = gamma.inv()
        images = []
        ok = True
        for x in domain:
            y = gamma * x * gi
            if y not in index:
                ok = False
                break
            images.append(index[y])
        if not ok:
            raise AssertionError("PSL is not normal in PGammaL")  # pragma: no cover
        perm = Perm(images)
        if perm.is_identity() and not gamma.is_identity():
            kernel.append(gamma)
        conj_perms.add(perm)

    return {
        "q": q,
        "aut_order": A.group.order,
        "pgammal_order": pgamma.order,
        "orders_match": A.group.order == pgamma.order,
        "conjugation_injective": not kernel,
        "conjugation_image_is_aut": conj_perms == set(A.group.elements),
        "pass": A.group.order == pgamma.order
        and not kernel
        and conj_perms == set(A.group.elements),
    }


def verify_semidirect_tower(q: int, frob_power: int | None = None, max_steps: int = 8) -> dict:
    """Normalizer tower of G = PGL(2,q) x| H inside PGammaL(2,q), compared
    stagewise against PGL(2,q) x| nor^alpha(H) computed in Aut(F_q)."""
    F = GFq(q)
    pgl = pgl2(q)
    pgamma = pgammal2(q)
    fr = frobenius_point_perm(q)
    frob_group = closure([fr], degree=pgl.degree)
    assert frob_group.order == F.k

    if frob_power is None:
        H = closure([Perm.identity(pgl.degree)], degree=pgl.degree)
    else:
        H = closure([fr**frob_power], degree=pgl.degree)
    if not frob_group.contains_group(H):
        raise NotSubgroup("H must come from the Frobenius group")

    g_elems = frozenset(g * h for g in pgl.elements for h in H.elements)
    G = subgroup(pgamma, g_elems)
    centerless = center(G).order == 1

    left = normalizer_tower(pgamma, G, max_steps=max_steps)
    right = normalizer_tower(frob_group, H, max_steps=max_steps)

    stage_checks = []
    n = max(len(left.stages), len(right.stages))
    for i in range(n):
        ls = left.stages[min(i, len(left.stages) - 1)]
        rs = right.stages[min(i, len(right.stages) - 1)]
        predicted = frozenset(g * h for g in pgl.elements for h in rs.elements)
        stage_checks.append(
            {
                "stage": i,
                "left_order": ls.order,
                "predicted_order": len(predicted),
                "equal": ls.elements == predicted,
            }
        )
    return {
        "q": q,
        "centerless": centerless,
        "tau_left": left.tau,
        "tau_right": right.tau,
        "stages": stage_checks,
        "pass": centerless and all(c["equal"] for c in stage_checks),
    }
