"""U_q(sl_n) with a triangular normal form, and the embedding of the twisted algebra.

Words are normalized to ``F-word * K^kappa * E-word``.  The F- and E-words are
reduced by a Groebner basis of the quantum Serre relations; since those
relations are homogeneous, a basis truncated at degree d reduces every word of
length <= d correctly, and the degree bound is chosen from the input.
Coefficients live in Q(v), v = q^(1/2).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import sympy

from .gb import GroebnerBasis
from .pbw import generators, is_normal_word, root_element
from .scalars import RationalFunctionDomain

DOMAIN = RationalFunctionDomain()
V = DOMAIN.v()
Q = V**2


class UqslGenerator(NamedTuple):
    kind: str  # "E", "F", "K", "Kinv"
    index: int

    def __str__(self):
        return f"{self.kind}{self.index}"


def E(i):
    return UqslGenerator("E", i)


def F(i):
    return UqslGenerator("F", i)


def K(i):
    return UqslGenerator("K", i)


def Kinv(i):
    return UqslGenerator("Kinv", i)


def cartan(i: int, j: int) -> int:
    if i == j:
        return 2
    return -1 if abs(i - j) == 1 else 0


def serre_relations(rank: int) -> list[dict]:
    """Serre relations on letters 0..rank-1 (letter t = generator t+1), for E or F alike."""
    one = DOMAIN.one()
    two = Q + 1 / Q
    rels = []
    for i in range(rank):
        for j in range(rank):
            if abs(i - j) > 1 and i > j:
                rels.append({(i, j): one, (j, i): -one})
            elif abs(i - j) == 1:
                rels.append({(i, i, j): one, (i, j, i): -two, (j, i, i): one})
    return rels


_serre_cache: dict = {}


def serre_basis(n: int, degree: int) -> GroebnerBasis:
    key = (n, degree)
    if key not in _serre_cache:
        _serre_cache[key] = GroebnerBasis(DOMAIN).complete(serre_relations(n - 1), degree)
    return _serre_cache[key]


# A term key is (F-word, kappa, E-word) with words over 1-based indices.
Mono = tuple


class UqslElement:
    """Linear combination of normal monomials F-word K^kappa E-word."""

    def __init__(self, n: int, terms: dict | None = None, degree: int = 6):
        self.n, self.degree = n, degree
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def one(cls, n: int, degree: int = 6):
        return cls(n, {((), (0,) * (n - 1), ()): DOMAIN.one()}, degree)

    @classmethod
    def from_word(cls, n: int, word, degree: int | None = None, coeff=None) -> "UqslElement":
        word = list(word)
        if degree is None:
            degree = max(3, len(word))
        x = cls.one(n, degree)
        for g in word:
            x = x.right_mul(g)
        return x.scale(DOMAIN.one() if coeff is None else coeff)

    def is_zero(self) -> bool:
        return not self.terms

    def _new(self, terms):
        return UqslElement(self.n, terms, self.degree)

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, DOMAIN.zero()) + c
        return self._new(out)

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return self._new({m: c * x for m, x in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, UqslElement) and (self - other).is_zero()

    # -- multiplication ------------------------------------------------------
    def _gb(self):
        return serre_basis(self.n, self.degree)

    def _reduce_word(self, word: tuple) -> dict:
        poly = self._gb().reduce({tuple(i - 1 for i in word): DOMAIN.one()})
        return {tuple(i + 1 for i in w): c for w, c in poly.items()}

    def right_mul(self, g: UqslGenerator) -> "UqslElement":
        out = self._new({})
        for (fw, kap, ew), c in self.terms.items():
            out = out + _mono_times(self.n, self.degree, fw, kap, ew, g).scale(c)
        return out

    def __mul__(self, other):
        if not isinstance(other, UqslElement):
            return self.scale(other)
        deg = max(self.degree, other.degree)
        out = UqslElement(self.n, {}, deg)
        for (fw, kap, ew), c in other.terms.items():
            x = UqslElement(self.n, self.terms, deg)
            for i in fw:
                x = x.right_mul(F(i))
            for i, e in enumerate(kap, 1):
                for _ in range(abs(e)):
                    x = x.right_mul(K(i) if e > 0 else Kinv(i))
            for i in ew:
                x = x.right_mul(E(i))
            out = out + x.scale(c)
        return out

    def __pow__(self, p: int):
        out = UqslElement.one(self.n, self.degree)
        for _ in range(p):
            out = out * self
        return out

    def __repr__(self):
        return fmt(self)


def _mono_times(n, degree, fw, kap, ew, g) -> UqslElement:
    one = DOMAIN.one()
    base = UqslElement(n, {}, degree)
    if g.kind == "E":
        red = base._reduce_word(ew + (g.index,))
        return UqslElement(n, {(fw, kap, w): c for w, c in red.items()}, degree)
    if g.kind in ("K", "Kinv"):
        e = 1 if g.kind == "K" else -1
        # E_i K_j = q^{-a_ji} K_j E_i, and the inverse statement for K_j^-1
        power = -e * sum(cartan(g.index, i) for i in ew)
        kk = list(kap)
        kk[g.index - 1] += e
        return UqslElement(n, {(fw, tuple(kk), ew): Q**power}, degree)
    if g.kind != "F":
        raise ValueError(f"unknown generator {g!r}")
    j = g.index
    if not ew:
        # K^kappa F_j = q^{-sum kappa_i a_ij} F_j K^kappa
        power = -sum(kap[i - 1] * cartan(i, j) for i in range(1, n))
        red = base._reduce_word(fw + (j,))
        return UqslElement(n, {(w, kap, ()): c * Q**power for w, c in red.items()}, degree)
    head, last = ew[:-1], ew[-1]
    left = UqslElement(n, {(fw, kap, head): one}, degree)
    out = left.right_mul(F(j)).right_mul(E(last))
    if last == j:
        t = 1 / (Q - 1 / Q)
        out = out + (left.right_mul(K(j)) - left.right_mul(Kinv(j))).scale(t)
    return out


def uqsl_normal_form(word, n: int, degree: int | None = None) -> UqslElement:
    """Normal form of a word in the generators (list of UqslGenerator)."""
    return UqslElement.from_word(n, word, degree)


def fmt(x: UqslElement) -> str:
    if x.is_zero():
        return "0"
    parts = []
    for (fw, kap, ew), c in sorted(x.terms.items(), key=lambda t: (len(t[0][0]) + len(t[0][2]), t[0])):
        letters = [f"F{i}" for i in fw]
        letters += [f"K{i}^{e}" for i, e in enumerate(kap, 1) if e]
        letters += [f"E{i}" for i in ew]
        parts.append(f"({DOMAIN.fmt(c)})*{'*'.join(letters) or '1'}")
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# The embedding


def phi_image(i: int, n: int, degree: int = 6) -> UqslElement:
    """Image of I_{i+1,i}: F_i - q K_i^{-1} E_i."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"index {i} out of range for sl_{n}")
    f = UqslElement.from_word(n, [F(i)], degree)
    ke = UqslElement.from_word(n, [Kinv(i), E(i)], degree)
    return f - ke.scale(Q)


@dataclass
class HomomorphismReport:
    n: int
    checked: list
    failures: list  # (label, formatted residual)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self):
        return {"n": self.n, "ok": self.ok, "checked": self.checked,
                "failures": [{"relation": a, "residual": b} for a, b in self.failures]}


def check_homomorphism(n: int) -> HomomorphismReport:
    """Substitute the images into every defining relation and normalize."""
    if n not in (3, 4):
        raise ValueError("symbolic homomorphism check is provided for n = 3 and 4")
    deg = 3
    img = {j: phi_image(j - 1, n, deg) for j in range(2, n + 1)}  # img[j] = phi(I_{j,j-1})
    two = Q + 1 / Q
    checked, failures = [], []
    for i in range(2, n):
        a, b = img[i], img[i + 1]
        r1 = a * a * b - (a * b * a).scale(two) + b * a * a + b
        r2 = a * b * b - (b * a * b).scale(two) + b * b * a + a
        for name, r in ((f"cubic1[{i}]", r1), (f"cubic2[{i}]", r2)):
            checked.append(name)
            if not r.is_zero():
                failures.append((name, fmt(r)))
    for i in range(2, n + 1):
        for j in range(i + 2, n + 1):
            name = f"commute[{i},{j}]"
            checked.append(name)
            r = img[i] * img[j] - img[j] * img[i]
            if not r.is_zero():
                failures.append((name, fmt(r)))
    return HomomorphismReport(n, checked, failures)


def phi_of(x, n: int, degree: int = 6) -> UqslElement:
    """Image of an element of the twisted algebra given by pbw letters."""
    out = UqslElement(n, {}, degree)
    cache: dict = {}
    for word, c in x.terms.items():
        term = UqslElement.one(n, degree).scale(DOMAIN.from_laurent(c) if hasattr(c, "terms") else c)
        for g in word:
            if g not in cache:
                exp = root_element(g.k, g.l, g.sign, DOMAIN)
                val = UqslElement(n, {}, degree)
                for w, cc in exp.terms.items():
                    t = UqslElement.one(n, degree).scale(cc)
                    for s in w:
                        t = t * phi_image(s.l, n, degree)
                    val = val + t
                cache[g] = val
            term = term * cache[g]
        out = out + term
    return out


def pbw_monomials(n: int, max_degree: int) -> list[tuple]:
    gs = generators(n)
    out = [()]
    for d in range(1, max_degree + 1):
        out += [w for w in itertools.product(gs, repeat=d) if is_normal_word(w)]
    return out


def phi_rank_check(n: int = 3, max_degree: int = 2, v_value: Fraction = Fraction(3, 2)) -> tuple[int, int]:
    """(rank, count) of the images of normal monomials of degree <= max_degree,
    with v specialized to a rational number."""
    from .algebra import Element

    mons = pbw_monomials(n, max_degree)
    images = []
    for w in mons:
        x = Element.word(DOMAIN, w)
        images.append(phi_of(x, n, max(3, 2 * max_degree)))
    keys = sorted({m for im in images for m in im.terms})
    rows = []
    for im in images:
        row = []
        for m in keys:
            c = im.terms.get(m)
            if c is None:
                row.append(0)
            else:
                f = DOMAIN.specialize(c, v_value)
                row.append(sympy.Rational(f.numerator, f.denominator))
        rows.append(row)
    rank = sympy.Matrix(rows).rank() if rows else 0
    return rank, len(mons)
