"""Coefficient arithmetic.

Three coefficient domains are provided:

* ``LaurentScalar``: exact Laurent polynomials in ``v = q^(1/2)`` with rational
  coefficients (generic q).
* ``CyclotomicScalar``: exact elements of Q(zeta) with zeta a primitive 2k-th
  root of unity, ``v := zeta`` and ``q := zeta**2``.
* complex numbers, with ``q = exp(2 pi i s / k)``.

A fourth, internal domain of rational functions in v is used by the Groebner
machinery (see ``RationalFunctionDomain``).

Each domain object exposes the same small protocol used by the algebra code:
``zero``, ``one``, ``from_laurent``, ``is_zero``, ``inv``, ``fmt``.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Hashable, Iterable, Mapping

import sympy
from sympy.polys.domains import QQ
from sympy.polys.fields import field as _sympy_field

ComplexScalar = complex
QExponent = complex

Rational = Fraction


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    return Fraction(x)


# ---------------------------------------------------------------------------
# Laurent polynomials in v


class LaurentScalar:
    """Immutable sparse Laurent polynomial sum_e c_e v^e with rational c_e."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                c = _frac(c)
                if c:
                    clean[int(e)] = c
        self._terms = tuple(sorted(clean.items()))
        self._hash = None

    # constructors
    @classmethod
    def const(cls, c) -> "LaurentScalar":
        return cls({0: c})

    @classmethod
    def v_power(cls, e: int, c=1) -> "LaurentScalar":
        return cls({e: c})

    @classmethod
    def q_power(cls, a) -> "LaurentScalar":
        """q^a for a in (1/2)Z."""
        two_a = _frac(a) * 2
        if two_a.denominator != 1:
            raise ValueError(f"q-exponent {a} is not a half-integer")
        return cls({int(two_a): 1})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _coerce(self, other) -> "LaurentScalar":
        if isinstance(other, LaurentScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentScalar.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = dict(self._terms)
        for e, c in other._terms:
            d[e] = d.get(e, 0) + c
        return LaurentScalar(d)

    __radd__ = __add__

    def __neg__(self):
        return LaurentScalar({e: -c for e, c in self._terms})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d: dict[int, Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                d[e1 + e2] = d.get(e1 + e2, 0) + c1 * c2
        return LaurentScalar(d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out = LaurentScalar.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inv(self) -> "LaurentScalar":
        if len(self._terms) != 1:
            raise ZeroDivisionError("only monomials are invertible among Laurent polynomials")
        (e, c), = self._terms
        return LaurentScalar({-e: 1 / c})

    def invert_v(self) -> "LaurentScalar":
        """Substitute v -> 1/v (equivalently q -> 1/q)."""
        return LaurentScalar({-e: c for e, c in self._terms})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("L", self._terms))
        return self._hash

    def evaluate(self, v):
        """Evaluate at a concrete value of v in any ring supporting + * and **."""
        out = 0
        for e, c in self._terms:
            out = out + _scale(c, v**e if e >= 0 else _inv_any(v) ** (-e))
        return out

    def __repr__(self):
        return f"LaurentScalar({self.fmt()})"

    def fmt(self) -> str:
        return format_laurent(self)


def _scale(c: Fraction, x):
    if isinstance(x, complex) or isinstance(x, float):
        return float(c) * x
    return x * c if not isinstance(x, int) else c * x


def _inv_any(x):
    if isinstance(x, (complex, float)):
        return 1 / x
    return x.inv()


def format_laurent(x: LaurentScalar) -> str:
    """Render as a sum of rational multiples of q-powers, e.g. ``q - 2*q^(-1/2)``.

    The output re-parses with the expression grammar of :mod:`uqso.parser`.
    """
    if x.is_zero():
        return "0"
    parts = []
    for e, c in sorted(x.terms.items(), reverse=True):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            power = "q" if e == 2 else f"q^({e}/2)" if e % 2 else f"q^({e // 2})"
            body = power if a == 1 else f"{a}*{power}"
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


Q_HALF = LaurentScalar.v_power(1)


def lq(a) -> LaurentScalar:
    """Shorthand for the Laurent scalar q^a, a a half-integer."""
    return LaurentScalar.q_power(a)


# ---------------------------------------------------------------------------
# Cyclotomic field Q(zeta_{2k})


@lru_cache(maxsize=None)
def cyclotomic_modulus(order: int) -> tuple[int, ...]:
    """Integer coefficients (constant term first) of the order-th cyclotomic polynomial."""
    x = sympy.Symbol("x")
    coeffs = sympy.Poly(sympy.cyclotomic_poly(order, x), x).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


def _reduce(coeffs: list[Fraction], mod: tuple[int, ...]) -> tuple[Fraction, ...]:
    deg = len(mod) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, deg - 1, -1):
        t = c[i]
        if t:
            # mod is monic
            for j in range(deg + 1):
                c[i - deg + j] -= t * mod[j]
    c = c[:deg] + [Fraction(0)] * max(0, deg - len(c))
    return tuple(c)


class CyclotomicScalar:
    """Element of Q(zeta) with zeta a primitive ``order``-th root of unity."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable = ()):
        self.order = order
        mod = cyclotomic_modulus(order)
        self.coeffs = _reduce([_frac(c) for c in coeffs], mod)

    @classmethod
    def zeta_power(cls, order: int, e: int, c=1) -> "CyclotomicScalar":
        e %= order
        return cls(order, [0] * e + [c])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, CyclotomicScalar):
            if other.order != self.order:
                raise ValueError("cyclotomic orders differ")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicScalar(self.order, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicScalar(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicScalar(self.order, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicScalar(self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        prod = [Fraction(0)] * (len(a) + len(b))
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CyclotomicScalar(self.order, prod)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out = CyclotomicScalar(self.order, [1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inv(self) -> "CyclotomicScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        x = sympy.Symbol("x")
        f = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in self.coeffs])), x, domain="QQ")
        m = sympy.Poly(list(reversed(cyclotomic_modulus(self.order))), x, domain="QQ")
        g = sympy.invert(f, m)
        cs = [Fraction(int(c.p), int(c.q)) for c in reversed(g.all_coeffs())]
        return CyclotomicScalar(self.order, cs)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inv()

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except ValueError:
            return False
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("C", self.order, self.coeffs))

    def to_complex(self, s: int = 1) -> complex:
        z = cmath.exp(2j * math.pi * s / self.order)
        return sum(float(c) * z**i for i, c in enumerate(self.coeffs))

    def __repr__(self):
        return f"CyclotomicScalar({self.order}, {[str(c) for c in self.coeffs]})"


# ---------------------------------------------------------------------------
# Domains


class LaurentDomain:
    name = "laurent"
    exact = True

    def zero(self):
        return LaurentScalar()

    def one(self):
        return LaurentScalar.const(1)

    def from_laurent(self, x: LaurentScalar):
        return x

    def is_zero(self, x) -> bool:
        return x.is_zero()

    def inv(self, x):
        return x.inv()

    def fmt(self, x) -> str:
        return x.fmt()

    def __eq__(self, other):
        return isinstance(other, LaurentDomain)

    def __hash__(self):
        return hash("laurent")

    def __repr__(self):
        return "LaurentDomain()"


class CyclotomicDomain:
    """Q(zeta_{2k}) with v = zeta, q = zeta^2 a primitive k-th root of unity (k odd)."""

    name = "cyclotomic"
    exact = True

    def __init__(self, k: int):
        if k < 1 or k % 2 == 0:
            raise ValueError("k must be an odd positive integer")
        self.k = k
        self.order = 2 * k

    def zero(self):
        return CyclotomicScalar(self.order)

    def one(self):
        return CyclotomicScalar(self.order, [1])

    def v(self):
        return CyclotomicScalar.zeta_power(self.order, 1)

    def from_laurent(self, x: LaurentScalar):
        out = [Fraction(0)] * self.order
        for e, c in x.terms.items():
            out[e % self.order] += c
        return CyclotomicScalar(self.order, out)

    def is_zero(self, x) -> bool:
        return x.is_zero()

    def inv(self, x):
        return x.inv()

    def fmt(self, x) -> str:
        """Reduced representative written in powers of q^(1/2) = zeta."""
        return format_laurent(LaurentScalar({i: c for i, c in enumerate(x.coeffs) if c}))

    def __eq__(self, other):
        return isinstance(other, CyclotomicDomain) and other.k == self.k

    def __hash__(self):
        return hash(("cyclotomic", self.k))

    def __repr__(self):
        return f"CyclotomicDomain(k={self.k})"


class ComplexDomain:
    """Floating point with q = exp(2 pi i s / k) and v = exp(pi i s / k)."""

    name = "complex"
    exact = False

    def __init__(self, k: int, s: int = 1, tol: float = 1e-12):
        check_root_spec(k, s)
        self.k, self.s, self.tol = k, s, tol
        self.v = cmath.exp(1j * math.pi * s / k)

    def zero(self):
        return 0j

    def one(self):
        return 1 + 0j

    def from_laurent(self, x: LaurentScalar):
        return sum((float(c) * self.v**e for e, c in x.terms.items()), 0j)

    def is_zero(self, x) -> bool:
        return abs(x) < self.tol

    def inv(self, x):
        return 1 / x

    def fmt(self, x) -> str:
        return f"({x.real:.12g}{x.imag:+.12g}j)"

    def __eq__(self, other):
        return isinstance(other, ComplexDomain) and (other.k, other.s) == (self.k, self.s)

    def __hash__(self):
        return hash(("complex", self.k, self.s))

    def __repr__(self):
        return f"ComplexDomain(k={self.k}, s={self.s})"


_RF, _RF_V = _sympy_field("v", QQ)


class RationalFunctionDomain:
    """The field Q(v) of rational functions, v = q^(1/2); used for Groebner work."""

    name = "ratfunc"
    exact = True
    field = _RF

    def zero(self):
        return _RF.zero

    def one(self):
        return _RF.one

    def v(self):
        return _RF_V

    def from_laurent(self, x: LaurentScalar):
        out = _RF.zero
        for e, c in x.terms.items():
            out += QQ(c.numerator, c.denominator) * _RF_V**e
        return out

    def is_zero(self, x) -> bool:
        return not x

    def inv(self, x):
        return 1 / x

    def fmt(self, x) -> str:
        return str(x.as_expr())

    def specialize(self, x, value: Fraction) -> Fraction:
        num = x.numer.as_expr().subs("v", sympy.Rational(value.numerator, value.denominator))
        den = x.denom.as_expr().subs("v", sympy.Rational(value.numerator, value.denominator))
        r = sympy.Rational(num) / sympy.Rational(den)
        return Fraction(int(r.p), int(r.q))

    def __eq__(self, other):
        return isinstance(other, RationalFunctionDomain)

    def __hash__(self):
        return hash("ratfunc")

    def __repr__(self):
        return "RationalFunctionDomain()"


def make_domain(name: str, k: int | None = None, s: int = 1):
    if name == "laurent":
        return LaurentDomain()
    if name == "cyclotomic":
        if k is None:
            raise ValueError("cyclotomic domain needs k")
        return CyclotomicDomain(k)
    if name == "complex":
        if k is None:
            raise ValueError("complex domain needs k")
        return ComplexDomain(k, s)
    if name == "ratfunc":
        return RationalFunctionDomain()
    raise ValueError(f"unknown domain {name!r}")


# ---------------------------------------------------------------------------
# Complex q-powers and q-numbers


def check_root_spec(k: int, s: int) -> None:
    if k < 1 or k % 2 == 0:
        raise ValueError(f"k must be an odd positive integer, got {k}")
    if math.gcd(s, k) != 1:
        raise ValueError(f"s={s} is not coprime to k={k}")


def q_power(x: complex, root_spec: tuple[int, int]) -> complex:
    """q^x := exp(2 pi i s x / k)."""
    k, s = root_spec
    check_root_spec(k, s)
    return cmath.exp(2j * math.pi * s * x / k)


def q_number(b: complex, root_spec: tuple[int, int]) -> complex:
    """[b] = (q^b - q^-b) / (q - q^-1)."""
    q = q_power(1, root_spec)
    if abs(q - 1 / q) < 1e-14:
        raise ValueError("q-numbers need q != +-1")
    return (q_power(b, root_spec) - q_power(-b, root_spec)) / (q - 1 / q)


def q_number_plus(b: complex, root_spec: tuple[int, int]) -> complex:
    """[b]_+ = (q^b + q^-b) / (q - q^-1)."""
    q = q_power(1, root_spec)
    if abs(q - 1 / q) < 1e-14:
        raise ValueError("q-numbers need q != +-1")
    return (q_power(b, root_spec) + q_power(-b, root_spec)) / (q - 1 / q)


class SqrtCache:
    """Principal square roots memoized by a caller-supplied key.

    Two requests with the same key return the very same value, so a branch
    chosen once is reused everywhere the key recurs.
    """

    def __init__(self):
        self._memo: dict[Hashable, complex] = {}

    def __call__(self, x: complex, cache_key: Hashable | None = None) -> complex:
        if cache_key is None:
            return cmath.sqrt(x)
        hit = self._memo.get(cache_key)
        if hit is None:
            hit = cmath.sqrt(x)
            self._memo[cache_key] = hit
        return hit

    def __len__(self):
        return len(self._memo)


_default_sqrt = SqrtCache()


def sqrt_consistent(x: complex, cache_key: Hashable | None = None, cache: SqrtCache | None = None) -> complex:
    """Principal square root; repeated keys give identical results."""
    return (cache or _default_sqrt)(x, cache_key)
