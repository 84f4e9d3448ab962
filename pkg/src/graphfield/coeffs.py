"""Prime-field coefficient arithmetic: Q (char 0) or F_r (char r).

Coefficients are plain `Fraction`s in characteristic 0 and ints in
[0, r) in characteristic r.  A `CoeffField` instance is attached to every
polynomial and never mixes characteristics.
"""
from __future__ import annotations

from fractions import Fraction

SUPPORTED_CHARS = (0, 2, 3, 5, 7)


class CoeffField:
    """The prime field of a given characteristic."""

    def __init__(self, char: int):
        if char not in SUPPORTED_CHARS:
            raise ValueError(f"unsupported characteristic {char}")
        self.char = char

    def __eq__(self, other):
        return isinstance(other, CoeffField) and self.char == other.char

    def __hash__(self):
        return hash(("CoeffField", self.char))

    def __repr__(self):
        return f"CoeffField({self.char})"

    # -- element constructors ------------------------------------------

    def of_int(self, n: int):
        if self.char == 0:
            return Fraction(n)
        return n % self.char

    def of_fraction(self, q: Fraction):
        if self.char == 0:
            return Fraction(q)
        num = q.numerator % self.char
        den = q.denominator % self.char
        if den == 0:
            raise ZeroDivisionError(f"denominator divisible by {self.char}")
        return num * pow(den, -1, self.char) % self.char

    @property
    def zero(self):
        return self.of_int(0)

    @property
    def one(self):
        return self.of_int(1)

    # -- arithmetic ----------------------------------------------------

    def add(self, a, b):
        return (a + b) % self.char if self.char else a + b

    def sub(self, a, b):
        return (a - b) % self.char if self.char else a - b

    def mul(self, a, b):
        return (a * b) % self.char if self.char else a * b

    def neg(self, a):
        return (-a) % self.char if self.char else -a

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.char == 0:
            return Fraction(1) / a
        return pow(a, -1, self.char)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0

    def is_one(self, a) -> bool:
        return a == self.of_int(1)

    # -- p-th roots ----------------------------------------------------

    def pth_root(self, a, p: int):
        """Exact p-th root in the prime field, or None.

        In Q this takes integer p-th roots of numerator and denominator
        (odd p handles negatives by sign).  In F_r the power map is
        inverted; when gcd(p, r-1) > 1 the fiber is searched directly,
        which is fine at r <= 7.
        """
        if self.char == 0:
            q = Fraction(a)
            sign = 1
            if q < 0:
                if p % 2 == 0:
                    return None
                sign, q = -1, -q
            num = _int_root(q.numerator, p)
            den = _int_root(q.denominator, p)
            if num is None or den is None:
                return None
            return Fraction(sign * num, den)
        r = self.char
        a %= r
        if a == 0:
            return 0
        if (r - 1) % p != 0:
            # x -> x^p is a bijection on F_r^*
            e = pow(p, -1, r - 1)
            return pow(a, e, r)
        for x in range(1, r):
            if pow(x, p, r) == a:
                return x
        return None

    def is_p_high(self, a, p: int) -> bool:
        """Whether `a` admits iterated p-th roots forever inside the prime field.

        In Q (p odd) that is exactly {0, 1, -1}.  In F_r^* the images of
        x -> x^(p^k) stabilize at the subgroup of index p^m where p^m is
        the p-part of r-1, and that subgroup is closed under taking p-th
        roots, so membership there decides the question.
        """
        if self.char == 0:
            return a in (Fraction(0), Fraction(1), Fraction(-1))
        r = self.char
        a %= r
        if a == 0 or (r - 1) % p != 0:
            return True  # 0^p = 0; or the power map is a bijection
        m = 0
        rest = r - 1
        while rest % p == 0:
            rest //= p
            m += 1
        return pow(a, (r - 1) // p**m, r) == 1


def _int_root(n: int, p: int):
    """Exact integer p-th root of n >= 0, or None."""
    if n in (0, 1):
        return n
    r = round(n ** (1.0 / p))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**p == n:
            return cand
    # float estimate can be off for large n; widen by bisection
    lo, hi = 1, 1 << ((n.bit_length() + p - 1) // p + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        v = mid**p
        if v == n:
            return mid
        if v < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None
