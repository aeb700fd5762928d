"""Exact arithmetic for lengths and event times.

Planning predicates run on plain rationals, but travel times at unit speed
involve square roots of rationals.  ``Radical`` represents Q-linear
combinations of square roots of positive integers exactly: addition,
multiplication and sign determination never round.  ``PolyRoot`` represents a
real root of a quadratic (or linear) polynomial with ``Radical`` coefficients
by an isolating rational bracket; the simulator uses it for event times where
two entities move at once.

Zero testing is exact: radicands are kept pairwise non-commensurable (no
product is a perfect square), and square roots of such integers are linearly
independent over Q.  Sign determination refines integer-sqrt enclosures until
the sign separates, which terminates because exact zeros are ruled out first.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .errors import ExactnessError

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_MAX_SIGN_BITS = 1 << 17


def _reduce_radicand(n: int) -> tuple[int, int]:
    """Write n = m*m*s with s free of small square factors. Returns (m, s)."""
    if n <= 0:
        raise ExactnessError("radicand must be positive")
    m = 1
    for p in _SMALL_PRIMES:
        pp = p * p
        while n % pp == 0:
            n //= pp
            m *= p
    r = isqrt(n)
    if r * r == n:
        return m * r, 1
    return m, n


def _sqrt_bounds(s: int, bits: int) -> tuple[Fraction, Fraction]:
    """Enclosure of sqrt(s) with denominator 2**bits."""
    scale = 1 << bits
    r = isqrt(s * scale * scale)
    return Fraction(r, scale), Fraction(r + 1, scale)


class Radical:
    """Exact number of the form sum_k c_k * sqrt(s_k), c_k rational, s_k int."""

    __slots__ = ("_terms", "_approx")

    def __init__(self, terms: dict[int, Fraction] | None = None):
        self._terms: dict[int, Fraction] = {}
        self._approx: float | None = None
        if terms:
            for s, c in terms.items():
                self._add_term(s, c)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rational(cls, q) -> "Radical":
        q = Fraction(q)
        r = cls()
        if q:
            r._terms[1] = q
        return r

    @classmethod
    def sqrt(cls, q) -> "Radical":
        """Exact square root of a nonnegative rational."""
        q = Fraction(q)
        if q < 0:
            raise ExactnessError("sqrt of negative rational")
        r = cls()
        if q == 0:
            return r
        m, s = _reduce_radicand(q.numerator * q.denominator)
        r._add_term(s, Fraction(m, q.denominator))
        return r

    def _add_term(self, s: int, coeff: Fraction) -> None:
        if not coeff:
            return
        terms = self._terms
        if s in terms:
            c = terms[s] + coeff
            if c:
                terms[s] = c
            else:
                del terms[s]
            return
        for u in terms:
            prod = u * s
            r = isqrt(prod)
            if r * r == prod:
                # sqrt(s) = (r/u) * sqrt(u): commensurable with existing key
                c = terms[u] + coeff * Fraction(r, u)
                if c:
                    terms[u] = c
                else:
                    del terms[u]
                return
        terms[s] = coeff

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(s == 1 for s in self._terms)

    def as_fraction(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if self.is_rational():
            return self._terms[1]
        raise ExactnessError("value is irrational")

    def sign(self) -> int:
        terms = self._terms
        if not terms:
            return 0
        signs = {1 if c > 0 else -1 for c in terms.values()}
        if len(signs) == 1:
            return signs.pop()
        bits = 64
        while bits <= _MAX_SIGN_BITS:
            lo, hi = self.enclosure(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise ExactnessError("sign undecided at maximum precision")

    def enclosure(self, bits: int) -> tuple[Fraction, Fraction]:
        lo = Fraction(0)
        hi = Fraction(0)
        for s, c in self._terms.items():
            if s == 1:
                lo += c
                hi += c
                continue
            a, b = _sqrt_bounds(s, bits)
            if c > 0:
                lo += c * a
                hi += c * b
            else:
                lo += c * b
                hi += c * a
        return lo, hi

    def __float__(self) -> float:
        if self._approx is None:
            total = 0.0
            for s, c in self._terms.items():
                total += float(c) * (s**0.5 if s != 1 else 1.0)
            self._approx = total
        return self._approx

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Radical | None":
        if isinstance(other, Radical):
            return other
        if isinstance(other, (int, Fraction)):
            return Radical.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        r = Radical()
        r._terms = dict(self._terms)
        for s, c in o._terms.items():
            r._add_term(s, c)
        return r

    __radd__ = __add__

    def __neg__(self):
        r = Radical()
        r._terms = {s: -c for s, c in self._terms.items()}
        return r

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        r = Radical()
        for s1, c1 in self._terms.items():
            for s2, c2 in o._terms.items():
                if s1 == s2:
                    r._add_term(1, c1 * c2 * s1)
                else:
                    m, s = _reduce_radicand(s1 * s2)
                    r._add_term(s, c1 * c2 * m)
        return r

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError
            q = Fraction(1, 1) / Fraction(other)
            r = Radical()
            r._terms = {s: c * q for s, c in self._terms.items()}
            return r
        if isinstance(other, Radical):
            if len(other._terms) == 1:
                ((s, c),) = other._terms.items()
                # 1 / (c*sqrt(s)) = sqrt(s) / (c*s)
                inv = Radical({s: Fraction(1, 1) / (c * s)})
                return self * inv
            raise ExactnessError("division by multi-term radical is not supported")
        return NotImplemented

    # -- comparisons ---------------------------------------------------------

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare Radical with {type(other)!r}")
        return (self - o).sign()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self):
        return bool(self._terms)

    # -- rendering ------------------------------------------------------------

    def terms(self) -> list[tuple[int, Fraction]]:
        return sorted(self._terms.items())

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for s, c in self.terms():
            if s == 1:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"sqrt({s})")
            else:
                parts.append(f"{c}*sqrt({s})")
        return " + ".join(parts).replace("+ -", "- ")


RAD_ZERO = Radical()
RAD_ONE = Radical.from_rational(1)


def rad(q) -> Radical:
    """Shorthand for building a rational-valued Radical."""
    return Radical.from_rational(q)


# ---------------------------------------------------------------------------
# Polynomial roots with Radical coefficients.
# ---------------------------------------------------------------------------


def _poly_eval(c2: Radical, c1: Radical, c0: Radical, x) -> Radical:
    """Evaluate c2*x^2 + c1*x + c0 at a rational or Radical x."""
    if isinstance(x, Fraction) or isinstance(x, int):
        return c2 * (Fraction(x) * Fraction(x)) + c1 * Fraction(x) + c0
    return c2 * x * x + c1 * x + c0


class PolyRoot:
    """A simple real root of c2*x^2 + c1*x + c0 isolated in (lo, hi).

    The polynomial changes sign across the bracket; refinement bisects on
    rational midpoints with exact sign evaluation, so the bracket can be
    narrowed without bound.
    """

    __slots__ = ("c2", "c1", "c0", "lo", "hi", "sign_lo")

    def __init__(self, c2: Radical, c1: Radical, c0: Radical,
                 lo: Fraction, hi: Fraction, sign_lo: int):
        self.c2 = c2
        self.c1 = c1
        self.c0 = c0
        self.lo = lo
        self.hi = hi
        self.sign_lo = sign_lo

    def eval_sign(self, x: Fraction) -> int:
        return _poly_eval(self.c2, self.c1, self.c0, x).sign()

    def refine(self, steps: int = 1) -> None:
        for _ in range(steps):
            mid = (self.lo + self.hi) / 2
            s = self.eval_sign(mid)
            if s == 0:
                # root is exactly rational: pinch the bracket around it
                self.lo = mid - (self.hi - self.lo) / (1 << 30)
                self.hi = mid + (self.hi - mid) / (1 << 30)
                return
            if s == self.sign_lo:
                self.lo = mid
            else:
                self.hi = mid

    def refine_until_excludes(self, x: Fraction, max_steps: int = 4096) -> None:
        for _ in range(max_steps):
            if not (self.lo < x < self.hi):
                return
            self.refine()
        raise ExactnessError("bracket refinement did not exclude point")

    def __float__(self):
        self.refine(20)
        return float((self.lo + self.hi) / 2)

    def __repr__(self):
        return f"PolyRoot[{float(self):.9g}]"


TimeValue = Radical | PolyRoot


def _resultant_zero(a2: Radical, a1: Radical, a0: Radical,
                    b2: Radical, b1: Radical, b0: Radical) -> bool:
    """True iff the two polynomials share a common (complex) root."""
    if a2.is_zero() and b2.is_zero():
        return (a1 * b0 - b1 * a0).is_zero()
    if a2.is_zero():
        # a linear, b quadratic: b(-a0/a1) == 0
        return (b2 * a0 * a0 - b1 * a0 * a1 + b0 * a1 * a1).is_zero()
    if b2.is_zero():
        return (a2 * b0 * b0 - a1 * b0 * b1 + a0 * b1 * b1).is_zero()
    t0 = a2 * b0 - b2 * a0
    t1 = a2 * b1 - b2 * a1
    t2 = a1 * b0 - b1 * a0
    return (t0 * t0 - t1 * t2).is_zero()


def compare_times(a: TimeValue, b: TimeValue) -> int:
    """Exact three-way comparison of event times."""
    if isinstance(a, Radical) and isinstance(b, Radical):
        return (a - b).sign()
    if isinstance(a, Radical):
        return -compare_times(b, a)
    if isinstance(b, Radical):
        # a is a PolyRoot; decide where the exact value b falls
        v = _poly_eval(a.c2, a.c1, a.c0, b)
        is_root = v.is_zero()
        bits = 128
        for _ in range(512):
            lo, hi = b.enclosure(bits)
            if hi < a.lo or (not is_root and hi <= a.lo):
                return 1
            if lo > a.hi or (not is_root and lo >= a.hi):
                return -1
            if is_root and a.lo < lo and hi < a.hi:
                return 0
            a.refine()
            if bits < (1 << 14):
                bits *= 2
        raise ExactnessError("compare_times failed to separate values")
    # both PolyRoot
    shared = _resultant_zero(a.c2, a.c1, a.c0, b.c2, b.c1, b.c0)
    for _ in range(512):
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1
        if shared and max(a.lo, b.lo) < min(a.hi, b.hi):
            width_a = a.hi - a.lo
            width_b = b.hi - b.lo
            if width_a < Fraction(1, 1 << 160) and width_b < Fraction(1, 1 << 160):
                return 0
        a.refine()
        b.refine()
    raise ExactnessError("compare_times (root/root) failed to separate")


def min_time(values):
    """Earliest of a nonempty iterable of TimeValues."""
    it = iter(values)
    best = next(it)
    for v in it:
        if compare_times(v, best) < 0:
            best = v
    return best


def sign_of_poly_at(c2: Radical, c1: Radical, c0: Radical, t: TimeValue) -> int:
    """Exact sign of c2*t^2 + c1*t + c0 at an event time.

    For PolyRoot times this is rigorous: the polynomial's own real roots are
    isolated, compared against t (detecting exact zeros), and the bracket of
    t is refined until it is free of them, so the sign is constant on it.
    """
    if isinstance(t, Radical):
        return _poly_eval(c2, c1, c0, t).sign()
    if c2.is_zero() and c1.is_zero():
        return c0.sign()
    if not c2.is_zero():
        disc = c1 * c1 - rad(4) * c2 * c0
        if disc.is_zero():
            # perfect square: c2*(x - r)^2 with r the root of 2*c2*x + c1
            s = sign_of_poly_at(RAD_ZERO, c2 * 2, c1, t)
            return 0 if s == 0 else c2.sign()
    roots = isolate_roots(c2, c1, c0)
    for r in roots:
        if compare_times(r, t) == 0:
            return 0
    # compare_times separated every root from t's bracket in place, so the
    # polynomial has constant nonzero sign on (t.lo, t.hi)
    mid = (t.lo + t.hi) / 2
    s = _poly_eval(c2, c1, c0, mid).sign()
    if s == 0:  # pragma: no cover - roots were excluded above
        raise ExactnessError("sign_of_poly_at hit an excluded root")
    return s


def isolate_roots(c2: Radical, c1: Radical, c0: Radical) -> list[TimeValue]:
    """All real roots of the polynomial, ascending.

    Double roots are dropped deliberately: event detection keys on sign
    changes, and a tangential touch is not a crossing.
    Identically-zero polynomials raise; callers must special-case them.
    """
    if c2.is_zero() and c1.is_zero():
        if c0.is_zero():
            raise ExactnessError("identically zero polynomial")
        return []
    if c2.is_zero():
        if c1.is_rational() and c0.is_rational():
            return [Radical.from_rational(-c0.as_fraction() / c1.as_fraction())]
        return [_bracket_linear(c1, c0)]
    disc = c1 * c1 - rad(4) * c2 * c0
    ds = disc.sign()
    if ds <= 0:
        return []
    # two simple roots; find a rational point strictly between them,
    # where the polynomial's sign is opposite to the leading coefficient
    s2 = c2.sign()
    mid = _between_roots_point(c2, c1, c0, s2)
    lo = _expand_to_sign(c2, c1, c0, mid, s2, -1)
    hi = _expand_to_sign(c2, c1, c0, mid, s2, +1)
    r1 = PolyRoot(c2, c1, c0, lo, mid, s2)
    r2 = PolyRoot(c2, c1, c0, mid, hi, -s2)
    return [r1, r2]


def _bracket_linear(c1: Radical, c0: Radical) -> PolyRoot:
    s1 = c1.sign()
    guess = Fraction(-float(c0) / float(c1)).limit_denominator(1 << 40) if float(c1) else Fraction(0)
    step = Fraction(1)
    lo = guess - step
    hi = guess + step
    z = Radical()
    for _ in range(256):
        slo = _poly_eval(z, c1, c0, lo).sign()
        shi = _poly_eval(z, c1, c0, hi).sign()
        if slo == 0:
            return PolyRoot(z, c1, c0, lo - Fraction(1, 1 << 30), lo + Fraction(1, 1 << 30), -s1)
        if shi == 0:
            return PolyRoot(z, c1, c0, hi - Fraction(1, 1 << 30), hi + Fraction(1, 1 << 30), -s1)
        if slo != shi:
            return PolyRoot(z, c1, c0, lo, hi, slo)
        step *= 4
        lo -= step
        hi += step
    raise ExactnessError("failed to bracket linear root")


def _between_roots_point(c2, c1, c0, s2: int) -> Fraction:
    """Rational x with sign(poly(x)) == -sign(c2); exists iff disc > 0."""
    bits = 64
    for _ in range(64):
        nlo, nhi = (-c1).enclosure(bits)
        dlo, dhi = (c2 * 2).enclosure(bits)
        if dlo > 0 or dhi < 0:
            cands = {Fraction(nlo + nhi, 2) / Fraction(dlo + dhi, 2)}
            for w in (Fraction(0), Fraction(1), Fraction(-1)):
                cands.add(next(iter(cands)) + w * Fraction(1, 1 << 20))
            for x in cands:
                if _poly_eval(c2, c1, c0, x).sign() == -s2:
                    return x
        bits *= 2
    raise ExactnessError("failed to find point between roots")


def _expand_to_sign(c2, c1, c0, start: Fraction, want: int, direction: int) -> Fraction:
    step = Fraction(1)
    x = start
    for _ in range(256):
        x = x + direction * step
        if _poly_eval(c2, c1, c0, x).sign() == want:
            return x
        step *= 4
    raise ExactnessError("failed to expand bracket")
