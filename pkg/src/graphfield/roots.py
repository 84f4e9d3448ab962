"""Decision procedures for p-th roots and p-high elements.

The root procedure is sound by construction and complete only on
structured elements:

  (i)   structured extraction: a single-monomial canonical form is solved
        exactly (exponent congruences per generator plus a rational
        function p-th root for the coefficient); any witness is
        re-verified by exponentiation before it is returned;
  (ii)  valuation filter: certified places whose value groups are pinned
        down (unramified chain-variable places, and defining-polynomial
        places that are provably totally ramified at one level) give
        divisibility obstructions that can never reject a true power;
  (iii) specialization: the element is pushed into a small prime field
        with consistently chosen root values; a defined nonzero image
        that fails the p-th power test is recorded as a refutation.

Everything else is an explicit Unknown.  Places whose extension values
are not forced are marked ambiguous and carry no information.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from .errors import BadPrime, ZeroInput
from .fieldtower import TowerContext, TowerElement, embed
from .polynomials import Poly
from .ratfunc import RatFunc

_MAX_CANDIDATES = 512
_SPECIALIZE_PRIME_SCAN = 200_000
_DLOG_TABLE_CAP = 1_000_000


# ---------------------------------------------------------------------------
# Valuations on the rational function field
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValuationPlace:
    """A place of the rational function field.

    kind "var":  order of vanishing at X_var = 0.
    kind "irr":  multiplicity of an irreducible polynomial g.
    kind "deg":  the degree place in one variable.
    """

    kind: str
    var: int | None = None
    poly: Poly | None = None
    label: str = ""


def g_adic_valuation(f: RatFunc, place: ValuationPlace) -> int:
    if f.is_zero():
        raise ZeroInput("valuation of 0 is undefined")
    if place.kind == "var":
        return f.num.min_degree_in(place.var) - f.den.min_degree_in(place.var)
    if place.kind == "irr":
        return f.num.multiplicity_of(place.poly) - f.den.multiplicity_of(place.poly)
    if place.kind == "deg":
        return f.den.degree_in(place.var) - f.num.degree_in(place.var)
    raise ValueError(f"unknown place kind {place.kind!r}")


@dataclass(frozen=True)
class CertifiedPlace:
    """A place together with the forced value data on the tower.

    `denominator` is the exact denominator of the value group of every
    valuation extension: 1 for chain-variable places (all defining
    polynomials are units there, so the whole tower is unramified), and
    N_i for the place at an irreducible defining polynomial A_i (value
    1, totally ramified at that one level, units elsewhere).
    """

    place: ValuationPlace
    gen_values: tuple  # Fraction value of each generator at this place
    denominator: int


def certified_places(ctx: TowerContext) -> list[CertifiedPlace]:
    cached = getattr(ctx, "_certified_places", None)
    if cached is not None:
        return cached
    out = []
    n_gens = len(ctx.gens)
    # chain-variable places: every A_i has a nonzero term free of the
    # variable (edge polynomials have constant term 1; generic defining
    # polynomials have nonzero constant term), so all generators are units
    for v, i in ctx.var_index.items():
        place = ValuationPlace(kind="var", var=i, label=f"X:{v}")
        vals = []
        ok = True
        for gi in range(n_gens):
            m = ctx.gen_poly(gi).min_degree_in(i)
            if m != 0:
                ok = False
                break
            vals.append(Fraction(0))
        if ok:
            out.append(CertifiedPlace(place=place, gen_values=tuple(vals), denominator=1))
    # defining-polynomial places, when A_i is certified irreducible and
    # divides no other defining polynomial
    for gi in range(n_gens):
        A = ctx.gen_poly(gi)
        if not _capelli_irreducible(A):
            continue
        ok = True
        vals = []
        for gj in range(n_gens):
            if gj == gi:
                vals.append(Fraction(1, ctx.gen_degree(gi)))
                continue
            if ctx.gen_poly(gj).multiplicity_of(A) != 0:
                ok = False
                break
            vals.append(Fraction(0))
        if ok and ctx.gen_degree(gi) > 1:
            place = ValuationPlace(kind="irr", poly=A, label=f"A:{ctx.gens[gi].label}")
            out.append(
                CertifiedPlace(place=place, gen_values=tuple(vals), denominator=ctx.gen_degree(gi))
            )
    ctx._certified_places = out
    return out


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _capelli_irreducible(A: Poly) -> bool:
    """Certify irreducibility for binomial-in-one-variable shapes
    c*X^m + B (B free of X, c a nonzero constant, m odd): X^m = b is
    irreducible iff b is not a q-th power for each prime q dividing m.
    Returns False (no certificate) for any other shape."""
    F = A.field
    for v in sorted(A.variables_used()):
        coeffs = A.coeffs_in(v)
        m = len(coeffs) - 1
        if m == 0:
            continue
        if any(not coeffs[k].is_zero() for k in range(1, m)):
            continue
        top = coeffs[m]
        if not top.is_constant():
            continue
        B = coeffs[0]
        if B.is_zero():
            continue
        if m == 1:
            return True  # linear with constant leading coefficient, primitive
        if m % 2 == 0:
            continue  # stay clear of the 4 | m exception
        c = top.constant_value()
        b = B.scale(F.neg(F.inv(c)))
        if all(b.pth_root(q) is None for q in _prime_factors(m)):
            return True
    return False


@dataclass
class PlaceValue:
    label: str
    value: Fraction | None
    exact: bool
    denominator: int


def valuation_vector(a: TowerElement, ctx: TowerContext | None = None) -> list[PlaceValue]:
    """Forced valuations of `a` at every certified place.

    A term's value is v(coefficient) + sum of exponent * v(generator);
    the element's value is the unique minimum when there is one, and an
    inexact lower bound (marked ambiguous) otherwise.
    """
    if a.is_zero():
        raise ZeroInput("valuation of 0 is undefined")
    ctx = ctx or a.ctx
    out = []
    for cp in certified_places(ctx):
        term_values = []
        for exps, c in a.coeffs.items():
            v = Fraction(g_adic_valuation(c, cp.place))
            for k, gv in zip(exps, cp.gen_values):
                if k:
                    v += k * gv
            term_values.append(v)
        lo = min(term_values)
        exact = term_values.count(lo) == 1
        out.append(PlaceValue(label=cp.place.label, value=lo, exact=exact, denominator=cp.denominator))
    return out


# ---------------------------------------------------------------------------
# Root results
# ---------------------------------------------------------------------------


@dataclass
class RootResult:
    outcome: str  # "root" | "no" | "unknown"
    witness: TowerElement | None = None
    certificate: dict | None = None
    note: str = ""

    def to_json(self) -> dict:
        doc = {"outcome": self.outcome, "note": self.note}
        if self.witness is not None:
            doc["witness"] = self.witness.to_json()
        if self.certificate is not None:
            doc["certificate"] = self.certificate
        return doc


def _structured_root(a: TowerElement, p: int) -> TowerElement | None:
    """Roots of single-monomial elements: solve p*beta = alpha modulo each
    generator degree, correct by defining-polynomial powers, and take the
    coefficient root in the rational function field."""
    if len(a.coeffs) != 1:
        return None
    ctx = a.ctx
    (alpha, c), = a.coeffs.items()
    per_gen: list[list[int]] = []
    total = 1
    for i, k in enumerate(alpha):
        n = ctx.gen_degree(i)
        g = math.gcd(p, n)
        if k % g:
            return None
        n_red = n // g
        base = (k // g) * pow(p // g, -1, n_red) % n_red
        sols = [base + t * n_red for t in range(g)]
        per_gen.append(sols)
        total *= len(sols)
        if total > _MAX_CANDIDATES:
            return None
    candidates = [()]
    for sols in per_gen:
        candidates = [c0 + (s,) for c0 in candidates for s in sols]
    for beta in candidates:
        target = c
        ok = True
        for i, (b, k) in enumerate(zip(beta, alpha)):
            shift = (p * b - k) // ctx.gen_degree(i)
            if shift:
                target = target / RatFunc.from_poly(ctx.gen_poly_power(i, shift))
        root_c = target.pth_root(p)
        if root_c is None:
            continue
        cand = TowerElement(ctx, {tuple(beta): root_c})
        if (cand**p) == a:
            return cand
    return None


def pth_root(a: TowerElement, p: int, ctx: TowerContext | None = None,
             spec_trials: int = 24, seed: int = 0) -> RootResult:
    """Three-stage p-th root decision; see the module docstring."""
    ctx = ctx or a.ctx
    if a.is_zero():
        return RootResult(outcome="root", witness=ctx.zero(), note="zero")
    w = _structured_root(a, p)
    if w is not None:
        assert (w**p) == a
        return RootResult(outcome="root", witness=w, note="structured extraction")
    for pv in valuation_vector(a, ctx):
        if not pv.exact:
            continue
        scaled = pv.value * pv.denominator
        assert scaled.denominator == 1
        if scaled.numerator % p != 0:
            return RootResult(
                outcome="no",
                certificate={
                    "kind": "valuation",
                    "place": pv.label,
                    "value": str(pv.value),
                    "value_group_denominator": pv.denominator,
                    "prime": p,
                },
                note=f"value {pv.value} at {pv.label} is not divisible by {p}",
            )
    if ctx.char == 0:
        rep = specialization_refute(a, p, trials=spec_trials, seed=seed)
        if rep["refuted"]:
            return RootResult(
                outcome="no",
                certificate={"kind": "specialization", **{k: rep[k] for k in ("q", "point")}},
                note="specialization refutation",
            )
    return RootResult(outcome="unknown", note="no decision within budget")


# ---------------------------------------------------------------------------
# Specialization
# ---------------------------------------------------------------------------


def _specialization_primes(ctx: TowerContext, p: int, count: int) -> list[int]:
    """Smallest `count` primes q = 1 mod lcm(p, all generator degrees).

    Several primes are needed: a rational constant can accidentally be a
    p-th power mod the first q while failing at the next one.
    """
    L = p
    for i in range(len(ctx.gens)):
        L = math.lcm(L, ctx.gen_degree(i))
    out = []
    q = L + 1
    scanned = 0
    while len(out) < count and scanned < _SPECIALIZE_PRIME_SCAN:
        if q > _DLOG_TABLE_CAP:
            break
        if _is_prime_int(q):
            out.append(q)
        q += L
        scanned += 1
    if not out:
        raise BadPrime(f"no admissible specialization prime below {_DLOG_TABLE_CAP}")
    return out


def _is_prime_int(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _dlog_table(q: int) -> tuple[int, dict]:
    """A generator of F_q^* and its full discrete-log table (q is small)."""
    factors = _prime_factors(q - 1)
    for g in range(2, q):
        if all(pow(g, (q - 1) // f, q) != 1 for f in factors):
            logs = {}
            x = 1
            for e in range(q - 1):
                logs[x] = e
                x = x * g % q
            return g, logs
    raise BadPrime(f"no generator found for F_{q}")  # pragma: no cover


def specialization_refute(a: TowerElement, p: int, trials: int = 24, seed: int = 0) -> dict:
    """Push `a` into F_q at random points with consistent root values and
    test p-th-power-ness by the (q-1)/p power map.

    Requires a characteristic-0 tower.  A defined nonzero image that is
    not a p-th power refutes; if every attempted point is consistent the
    report says so without claiming a proof.
    """
    ctx = a.ctx
    if ctx.char != 0:
        raise ValueError("specialization targets need a characteristic-0 tower")
    primes = _specialization_primes(ctx, p, count=4)
    rng = random.Random(seed)
    per_q = max(6, trials // len(primes))
    points_tried = 0
    consistent = 0
    for q in primes:
        g, logs = _dlog_table(q)
        for _ in range(per_q):
            for _retry in range(20):
                point = [rng.randrange(1, q) for _ in range(ctx.nvars)]
                eta = []
                ok = True
                for i in range(len(ctx.gens)):
                    n = ctx.gen_degree(i)
                    try:
                        val = ctx.gen_poly(i).eval_mod(point, q)
                    except ZeroDivisionError:
                        ok = False
                        break
                    if val == 0:
                        ok = False
                        break
                    e = logs[val]
                    if e % n:
                        ok = False  # the needed n-th root does not exist here
                        break
                    eta.append(pow(g, e // n, q))
                if not ok:
                    continue
                try:
                    image = 0
                    for exps, c in a.coeffs.items():
                        v = c.eval_mod(point, q)
                        for ei, k in zip(eta, exps):
                            if k:
                                v = v * pow(ei, k, q) % q
                        image = (image + v) % q
                except ZeroDivisionError:
                    continue
                if image == 0:
                    continue
                points_tried += 1
                if pow(image, (q - 1) // p, q) != 1:
                    return {
                        "refuted": True,
                        "q": q,
                        "point": {"vars": point, "roots": eta, "image": image},
                        "points_tried": points_tried,
                    }
                consistent += 1
                break
    return {
        "refuted": False,
        "q": primes[0],
        "point": None,
        "points_tried": points_tried,
        "consistent_points": consistent,
    }


# ---------------------------------------------------------------------------
# p-high elements
# ---------------------------------------------------------------------------


@dataclass
class PHighResult:
    verdict: str  # "true" | "false" | "unknown"
    depth_reached: int
    chain: list = dataclass_field(default_factory=list)
    certificate: dict | None = None


def is_p_high(a: TowerElement, p: int, depth_budget: int = 3, seed: int = 0) -> PHighResult:
    """Iterated p-th root extraction, deepening the tower profile when the
    current truncation runs out of room.

    true: the budget was reached with a root at every stage inside the
    grown tower.  false: some stage was refused with a certificate (the
    verdict is about the budget-grown truncation).  unknown otherwise.
    """
    ctx = a.ctx
    has_chain = p == ctx.chain_prime or any(g.prime == p for g in ctx.gens)
    cur = a
    chain = [a]
    deepened = 0
    found = 0
    while found < depth_budget:
        res = pth_root(cur, p, seed=seed + found)
        if res.outcome == "root":
            cur = res.witness
            chain.append(cur)
            found += 1
            continue
        if has_chain and deepened < depth_budget:
            grown = cur.ctx.deepen(
                vertex_delta=1 if p == ctx.chain_prime else 0,
                edge_delta=1 if p != ctx.chain_prime else 0,
                only_prime=p,
            )
            deeper = embed(cur, grown)
            res2 = pth_root(deeper, p, seed=seed + found)
            deepened += 1
            if res2.outcome == "root":
                cur = res2.witness
                chain.append(cur)
                found += 1
                continue
            res = res2
        if res.outcome == "no":
            return PHighResult(
                verdict="false", depth_reached=found, chain=chain, certificate=res.certificate
            )
        return PHighResult(verdict="unknown", depth_reached=found, chain=chain)
    return PHighResult(verdict="true", depth_reached=found, chain=chain)


# ---------------------------------------------------------------------------
# Classification of structured elements
# ---------------------------------------------------------------------------


@dataclass
class PHighForm:
    """unit * product of vertex roots^m * product of edge roots^m."""

    unit: object
    vertex_part: dict  # vertex -> (depth_index, exponent)
    edge_part: dict    # generator label -> (depth_index, exponent)


def classify_p_high(a: TowerElement, p: int) -> tuple[PHighForm | None, str]:
    """Syntactic monomial classification.

    Returns (form, "") when the canonical form is unit * generator
    monomial matching the p-family (vertex roots for the chain prime,
    same-prime edge roots otherwise) with a p-high unit; otherwise
    (None, reason).
    """
    ctx = a.ctx
    if a.is_zero():
        return None, "zero"
    if len(a.coeffs) != 1:
        return None, "not a monomial"
    (alpha, c), = a.coeffs.items()
    num, den = c.num, c.den
    a_pows = []
    for i in range(len(ctx.gens)):
        A = ctx.gen_poly(i)
        kn = num.multiplicity_of(A)
        kd = den.multiplicity_of(A)
        if kn:
            num = num.divexact(A**kn)
        if kd:
            den = den.divexact(A**kd)
        a_pows.append(kn - kd)
    if len(num.terms) != 1 or len(den.terms) != 1:
        return None, "coefficient is not a monomial"
    (en, cn), = num.terms.items()
    (ed, cd), = den.terms.items()
    unit = ctx.field.div(cn, cd)
    vertex_exps = [x - y for x, y in zip(en, ed)]
    gen_exps = [alpha[i] + ctx.gen_degree(i) * a_pows[i] for i in range(len(ctx.gens))]

    vertex_part = {}
    for v, i in ctx.var_index.items():
        z = vertex_exps[i]
        if z == 0:
            continue
        d = ctx.vertex_depths[v]
        val = _padic_val(abs(z), ctx.chain_prime)
        n = d - min(val, d)
        m = z // ctx.chain_prime ** (d - n)
        vertex_part[v] = (n, m)
    edge_part = {}
    for i, g in enumerate(ctx.gens):
        w = gen_exps[i]
        if w == 0:
            continue
        val = _padic_val(abs(w), g.prime)
        n = g.depth - min(val, g.depth)
        m = w // g.prime ** (g.depth - n)
        edge_part[g.label] = (n, m)

    if p == ctx.chain_prime:
        if edge_part:
            return None, "edge roots present in a chain-prime classification"
    else:
        if vertex_part:
            return None, "vertex roots present in an edge-prime classification"
        bad = [lbl for lbl in edge_part if ctx.gens[ctx.gen_index[lbl]].prime != p]
        if bad:
            return None, f"edge roots with a different prime: {bad}"
        colors = {ctx.gens[ctx.gen_index[lbl]].color for lbl in edge_part}
        if len(colors) > 1:
            return None, "edge roots of mixed colors"
    if not ctx.field.is_p_high(unit, p):
        return None, "unit is not p-high in the prime field"
    return PHighForm(unit=unit, vertex_part=vertex_part, edge_part=edge_part), ""


def _padic_val(n: int, p: int) -> int:
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


def q_high_descends(ctx: TowerContext, q: int, samples: int = 20, seed: int = 0,
                    depth_budget: int = 2) -> dict:
    """For a prime q outside the tower primes, sampled non-base elements
    must never verify as q-high; base constants follow the prime-field
    rule."""
    if q == ctx.chain_prime or any(g.prime == q for g in ctx.gens):
        raise ValueError("q must differ from all tower primes")
    rng = random.Random(seed)
    from .fieldtower import random_nonzero_element, random_structured_monomial

    results = {"true": 0, "false": 0, "unknown": 0}
    violations = []
    for t in range(samples):
        x = (
            random_structured_monomial(ctx, rng)
            if t % 2 == 0
            else random_nonzero_element(ctx, rng, max_terms=2, allow_denominator=False)
        )
        if x.is_base():
            continue
        res = is_p_high(x, q, depth_budget=depth_budget, seed=seed + t)
        results[res.verdict] += 1
        if res.verdict == "true":
            violations.append(x.to_json())
    base_ok = is_p_high(ctx.one(), q, depth_budget=depth_budget).verdict == "true"
    return {
        "q": q,
        "samples": results,
        "violations": violations,
        "base_one_is_high": base_ok,
        "pass": not violations and base_ok,
    }
