"""Tableau bases and representation matrices at q a root of unity.

Four families are built:

* ``cyclic``: every tableau entry below the top row runs over h, h+1, ..., h+k-1
  with wrap-around;
* ``partial``: entries with index <= cutoff are cyclic, the others run over
  integers or half-integers subject to betweenness;
* ``nonclassical``: like ``partial`` with half-integer entries >= 1/2 and the
  modified operators with signs epsilon;
* ``minimal``: one entry per row, all cyclic.

Square roots.  The coefficients A and B are square roots of products of
q-numbers.  Each q-number factor [L] is rewritten with its linear form L in a
canonical orientation (the leading variable, in the order (row descending,
index ascending), gets a positive coefficient); a flipped factor contributes
sqrt(-[L]) := i*sqrt([L]).  The principal root of each canonical factor is
memoized under a key naming the factor and the entries it depends on.  With
this convention identical factors met along different paths get identical
roots, so the operators satisfy the defining relations; taking one principal
root of the whole product does not (it fails from n = 4 on).
"""
from __future__ import annotations

import cmath
import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .scalars import CyclotomicScalar, SqrtCache, check_root_spec

CLASSES = ("cyclic", "partial", "minimal", "nonclassical")
GENERICITY_MARGIN = 1e-6
DEGENERACY_TOL = 1e-12


class SpecError(ValueError):
    """Invalid representation parameters; ``problems`` lists every violation."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class DegenerateDenominator(ArithmeticError):
    pass


def half(n: int) -> int:
    return n // 2


def positive_root_count(n: int) -> int:
    """Number of positive roots of so_n, i.e. (dim - rank) / 2."""
    return (n * (n - 1) // 2 - n // 2) // 2


def dist_half_integers(x: complex) -> float:
    """Distance from x to the set (1/2)Z."""
    x = complex(x)
    return abs(x - round(2 * x.real) / 2)


def _cx(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValueError(f"complex values are [re, im] pairs, got {x!r}")
        return complex(float(x[0]), float(x[1]))
    return complex(x)


def _exact_half(x) -> Fraction:
    """Parse an integer or half-integer (given as number, 'a/2' string or [re, 0])."""
    if isinstance(x, (list, tuple)):
        if len(x) != 2 or float(x[1]) != 0:
            raise ValueError(f"expected a real half-integer, got {x!r}")
        x = x[0]
    if isinstance(x, complex):
        if x.imag:
            raise ValueError(f"expected a real half-integer, got {x!r}")
        x = x.real
    f = Fraction(x) if not isinstance(x, float) else Fraction(x).limit_denominator(4)
    if (2 * f).denominator != 1:
        raise ValueError(f"{x!r} is not an integer or half-integer")
    if isinstance(x, float) and abs(float(f) - x) > 1e-12:
        raise ValueError(f"{x!r} is not an integer or half-integer")
    return f


# ---------------------------------------------------------------------------
# Parameters


@dataclass
class RepSpec:
    """Parameters omega of a representation.

    ``m_n`` holds the top row: complex entries first, then (partial and
    nonclassical classes) the exact integer or half-integer tail.  ``c`` and
    ``h`` are keyed by ``(i, j)`` = (entry index, row).  ``epsilon`` maps the
    row index j (2i+2 <= j <= n) to +-1.
    """

    cls: str
    n: int
    k: int
    s: int = 1
    m_n: list = field(default_factory=list)
    c: dict = field(default_factory=dict)
    h: dict = field(default_factory=dict)
    cutoff_i: int | None = None
    epsilon: dict = field(default_factory=dict)

    @property
    def cutoff(self) -> int:
        if self.cls in ("partial", "nonclassical"):
            return self.cutoff_i
        if self.cls == "minimal":
            return 1
        return half(self.n)

    def is_cyclic_slot(self, j: int, r: int) -> bool:
        return j <= self.cutoff

    def slots(self) -> list[tuple[int, int]]:
        """Entries below the top row, in basis order (row n-1 first)."""
        if self.cls == "minimal":
            return [(1, r) for r in range(self.n - 1, 1, -1)]
        return [(j, r) for r in range(self.n - 1, 1, -1) for j in range(1, half(r) + 1)]

    def top(self, j: int):
        return self.m_n[j - 1]

    def parameter_count(self) -> int:
        return len(self.m_n) + len(self.c) + len(self.h)

    # -- validation -------------------------------------------------------
    def problems(self) -> list[str]:
        out: list[str] = []
        n, k = self.n, self.k
        if self.cls not in CLASSES:
            return [f"class: unknown class {self.cls!r}"]
        if not isinstance(n, int) or n < 2 or (n < 3 and self.cls != "cyclic"):
            out.append(f"n: must be an integer >= 3 (>= 2 for cyclic), got {n!r}")
            return out
        try:
            check_root_spec(k, self.s)
        except ValueError as e:
            out.append(f"k/s: {e}")
            return out
        if k < 3:
            out.append(f"k: must be >= 3, got {k}")
        need_top = 1 if self.cls == "minimal" else half(n)
        if len(self.m_n) != need_top:
            out.append(f"m_n: expected {need_top} entries, got {len(self.m_n)}")
            return out
        cut = self.cutoff
        if self.cls in ("partial", "nonclassical"):
            if not isinstance(cut, int) or not 1 <= cut < half(n):
                out.append(f"cutoff_i: need 1 <= i < {half(n)}, got {cut!r}")
                return out
        # keys of c and h
        want = {(j, r) for (j, r) in self.slots() if j <= cut}
        for name, d in (("c", self.c), ("h", self.h)):
            missing = sorted(want - set(d))
            extra = sorted(set(d) - want)
            if missing:
                out.append(f"{name}: missing entries {', '.join(f'{a},{b}' for a, b in missing)}")
            if extra:
                out.append(f"{name}: unexpected entries {', '.join(f'{a},{b}' for a, b in extra)}")
        for key, val in self.c.items():
            if abs(val) < GENERICITY_MARGIN:
                out.append(f"c[{key[0]},{key[1]}]: must be nonzero")
        out += self._genericity_problems()
        if self.cls in ("partial", "nonclassical"):
            out += self._tail_problems()
        if self.cls == "nonclassical":
            want_eps = set(range(2 * cut + 2, n + 1))
            if set(self.epsilon) != want_eps:
                out.append(f"epsilon: expected signs for rows {sorted(want_eps)}, got {sorted(self.epsilon)}")
            for j, e in self.epsilon.items():
                if e not in (1, -1):
                    out.append(f"epsilon[{j}]: must be +1 or -1, got {e!r}")
        return out

    def _genericity_problems(self) -> list[str]:
        n, cut = self.n, self.cutoff
        checks: list[tuple[str, complex]] = []
        ncx = 1 if self.cls == "minimal" else min(cut, half(n))
        for a in range(1, ncx + 1):
            checks.append((f"m[{a},{n}]", self.top(a)))
        for (i, j), hv in self.h.items():
            checks.append((f"h[{i},{j}]", hv))
            for (s_, jj), hw in self.h.items():
                if jj == j and s_ != i and i < s_:
                    checks.append((f"h[{i},{j}]-h[{s_},{j}]", hv - hw))
                if jj == j and i <= s_:
                    checks.append((f"h[{i},{j}]+h[{s_},{j}]", hv + hw))
                if jj == j + 1:
                    checks.append((f"h[{i},{j}]-h[{s_},{jj}]", hv - hw))
                    checks.append((f"h[{i},{j}]+h[{s_},{jj}]", hv + hw))
            if j == n - 1:
                for a in range(1, ncx + 1):
                    checks.append((f"h[{i},{j}]-m[{a},{n}]", hv - self.top(a)))
                    checks.append((f"h[{i},{j}]+m[{a},{n}]", hv + self.top(a)))
        return [f"genericity: {name} = {complex(v):.6g} lies in (1/2)Z"
                for name, v in checks if dist_half_integers(v) < GENERICITY_MARGIN]

    def _tail_problems(self) -> list[str]:
        n, k, cut = self.n, self.k, self.cutoff
        out = []
        tail = self.m_n[cut:]
        try:
            tail = [_exact_half(x) for x in tail]
        except ValueError as e:
            return [f"m_n tail: {e}"]
        kinds = {x.denominator for x in tail}
        if len(kinds) > 1:
            out.append("m_n tail: entries must be all integers or all half-integers")
        if self.cls == "nonclassical":
            if kinds != {2}:
                out.append("m_n tail: nonclassical entries must be half-integers")
            if any(x < Fraction(1, 2) for x in tail):
                out.append("m_n tail: entries must be >= 1/2")
        for a, b in zip(tail, tail[1:]):
            if a < b:
                out.append("m_n tail: entries must be non-increasing")
                break
        if self.cls == "partial":
            if n % 2 == 0 and len(tail) >= 2 and tail[-2] < abs(tail[-1]):
                out.append("m_n tail: second-to-last entry must dominate |last|")
            if n % 2 == 1 and tail and tail[-1] < 0:
                out.append("m_n tail: last entry must be >= 0")
        l_first = l_coordinate(cut + 1, n, tail[0])
        l_last = l_coordinate(half(n), n, tail[-1])
        if not (l_first + l_last < k):
            out.append(f"m_n tail: l[{cut + 1},{n}] + l[{half(n)},{n}] = {l_first + l_last} must be < k = {k}")
        if not (l_first - l_last < k):
            out.append(f"m_n tail: l[{cut + 1},{n}] - l[{half(n)},{n}] = {l_first - l_last} must be < k = {k}")
        return out

    def validate(self) -> "RepSpec":
        probs = self.problems()
        if probs:
            raise SpecError(probs)
        return self

    # -- JSON -------------------------------------------------------------
    def to_json(self) -> dict:
        def enc(z):
            if isinstance(z, Fraction):
                return str(z) if z.denominator != 1 else int(z)
            z = complex(z)
            return [z.real, z.imag]

        d = {
            "class": self.cls,
            "n": self.n,
            "k": self.k,
            "s": self.s,
            "m_n": [enc(x) for x in self.m_n],
            "c": {f"{a},{b}": enc(v) for (a, b), v in sorted(self.c.items())},
            "h": {f"{a},{b}": enc(v) for (a, b), v in sorted(self.h.items())},
        }
        if self.cls in ("partial", "nonclassical"):
            d["cutoff_i"] = self.cutoff_i
        if self.cls == "nonclassical":
            d["epsilon"] = [self.epsilon[j] for j in sorted(self.epsilon)]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "RepSpec":
        problems = []
        for key in ("class", "n", "k"):
            if key not in d:
                problems.append(f"{key}: required field missing")
        if problems:
            raise SpecError(problems)
        klass = d["class"]
        n, k = d["n"], d["k"]
        cut = d.get("cutoff_i")
        if klass in ("partial", "nonclassical") and not isinstance(cut, int):
            raise SpecError(["cutoff_i: required integer for partial/nonclassical classes"])
        ncx = {"cyclic": half(n), "minimal": 1}.get(klass, cut)

        def key(s: str, name: str):
            try:
                a, b = (int(t) for t in s.split(","))
                return a, b
            except ValueError:
                problems.append(f"{name}: bad key {s!r}, expected 'i,j'")
                return None

        m_n = []
        for idx, x in enumerate(d.get("m_n", [])):
            try:
                if isinstance(ncx, int) and idx >= ncx:
                    m_n.append(_exact_half(Fraction(x) if isinstance(x, str) else x))
                else:
                    m_n.append(_cx(x))
            except (ValueError, TypeError) as e:
                problems.append(f"m_n[{idx}]: {e}")
        cd, hd = {}, {}
        for name, src, dst in (("c", d.get("c", {}), cd), ("h", d.get("h", {}), hd)):
            for s_, v in src.items():
                kk = key(s_, name)
                if kk is None:
                    continue
                try:
                    dst[kk] = _cx(v)
                except (ValueError, TypeError) as e:
                    problems.append(f"{name}[{s_}]: {e}")
        eps = {}
        if klass == "nonclassical":
            signs = d.get("epsilon", [])
            if isinstance(cut, int):
                eps = {2 * cut + 2 + t: int(e) for t, e in enumerate(signs)}
        if problems:
            raise SpecError(problems)
        spec = cls(klass, n, k, d.get("s", 1), m_n, cd, hd, cut, eps)
        return spec

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "RepSpec":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise SpecError([f"json: {e.msg} at line {e.lineno} column {e.colno}"]) from None
        if not isinstance(d, dict):
            raise SpecError(["json: top level must be an object"])
        return cls.from_json(d)


def l_coordinate(j: int, r: int, m):
    """l_{j,2p+1} = m + p - j + 1, l_{j,2p} = m + p - j."""
    p = r // 2
    return m + p - j + 1 if r % 2 else m + p - j


# ---------------------------------------------------------------------------
# Tableaux


@dataclass(frozen=True)
class Tableau:
    """One basis vector: the rows m_s, s = n, n-1, ..., 2."""

    rows: tuple

    def row(self, s: int, n: int):
        return self.rows[n - s]

    def __str__(self):
        def f(x):
            if isinstance(x, Fraction):
                return str(x)
            x = complex(x)
            return f"{x.real:.4g}{x.imag:+.4g}i" if x.imag else f"{x.real:.4g}"

        return " | ".join(" ".join(f(x) for x in r) for r in self.rows)


class _Basis:
    """Enumerated tableau labels plus lookup; a label stores, per slot, either
    the cyclic offset a in 0..k-1 or the exact classical value."""

    def __init__(self, spec: RepSpec, labels: list[tuple]):
        self.spec = spec
        self.slots = spec.slots()
        self.slot_index = {s: t for t, s in enumerate(self.slots)}
        self.labels = labels
        self.index = {lab: t for t, lab in enumerate(labels)}

    def __len__(self):
        return len(self.labels)

    def value(self, label: tuple, j: int, r: int):
        spec = self.spec
        if r == spec.n:
            return spec.top(j)
        x = label[self.slot_index[(j, r)]]
        if spec.is_cyclic_slot(j, r):
            return spec.h[(j, r)] + x
        return x

    def shift(self, label: tuple, j: int, r: int, d: int):
        t = self.slot_index[(j, r)]
        x = list(label)
        if self.spec.is_cyclic_slot(j, r):
            x[t] = (x[t] + d) % self.spec.k
        else:
            x[t] = x[t] + d
        x = tuple(x)
        return x if x in self.index else None

    def tableau(self, label: tuple) -> Tableau:
        spec = self.spec
        n = spec.n
        rows = [tuple(spec.m_n)]
        for r in range(n - 1, 1, -1):
            width = 1 if spec.cls == "minimal" else half(r)
            rows.append(tuple(self.value(label, j, r) for j in range(1, width + 1)))
        return Tableau(tuple(rows))


def _classical_bounds(spec: RepSpec, j: int, r: int, upper: dict):
    """Allowed range for the classical entry (j, r) given row r+1 values."""
    nonclassical = spec.cls == "nonclassical"
    R = r + 1
    if R % 2:  # upper row 2P+1, lower row 2P
        P = (R - 1) // 2
        hi = upper[j]
        lo = upper[j + 1] if j + 1 <= P else None
        if j == P:
            lo = Fraction(1, 2) if nonclassical else -upper[j]
        return lo, hi
    P = R // 2  # upper row 2P, lower row 2P-1
    hi = upper[j]
    nxt = upper[j + 1]
    lo = nxt if (nonclassical or j + 1 < P) else abs(nxt)
    return lo, hi


def enumerate_labels(spec: RepSpec) -> list[tuple]:
    n, k = spec.n, spec.k
    slots = spec.slots()
    cut = spec.cutoff
    rows = list(range(n - 1, 1, -1))
    tail_step = None
    if spec.cls in ("partial", "nonclassical"):
        tail_step = Fraction(spec.m_n[cut]).denominator

    def rec(ri: int, upper_classical: dict, acc: list):
        if ri == len(rows):
            yield tuple(acc)
            return
        r = rows[ri]
        width = 1 if spec.cls == "minimal" else half(r)
        choices = []
        for j in range(1, width + 1):
            if spec.is_cyclic_slot(j, r):
                choices.append(range(k))
            else:
                lo, hi = _classical_bounds(spec, j, r, upper_classical)
                vals = []
                x = lo
                while x <= hi:
                    vals.append(x)
                    x += 1
                choices.append(vals)
        for combo in itertools.product(*choices):
            cls_vals = {j: v for j, v in zip(range(1, width + 1), combo) if not spec.is_cyclic_slot(j, r)}
            yield from rec(ri + 1, cls_vals, acc + list(combo))

    top = {j: spec.top(j) for j in range(cut + 1, half(n) + 1)} if spec.cls in ("partial", "nonclassical") else {}
    labels = list(rec(0, top, []))
    labels.sort()
    return labels


def enumerate_basis(spec: RepSpec) -> list[Tableau]:
    """Basis tableaux in the fixed order: lexicographic by rows n-1, n-2, ..., 2."""
    spec.validate()
    b = _Basis(spec, enumerate_labels(spec))
    return [b.tableau(lab) for lab in b.labels]


# ---------------------------------------------------------------------------
# Coefficients


class _Coeffs:
    def __init__(self, spec: RepSpec, basis: _Basis, sqrt: SqrtCache | None = None):
        self.spec, self.basis = spec, basis
        self.k, self.s = spec.k, spec.s
        self.sqrt = sqrt or SqrtCache()
        self._w = 2j * math.pi * spec.s / spec.k
        self._dq = self.qp(1) - self.qp(-1)

    def qp(self, x) -> complex:
        return cmath.exp(self._w * complex(x))

    def qn(self, b) -> complex:
        return (self.qp(b) - self.qp(-b)) / self._dq

    def qplus(self, b) -> complex:
        return (self.qp(b) + self.qp(-b)) / self._dq

    def l(self, lab, j, r):
        return l_coordinate(j, r, self.basis.value(lab, j, r))

    def entry_token(self, lab, j, r):
        if r == self.spec.n:
            return ("top", j)
        return lab[self.basis.slot_index[(j, r)]]

    def root_factor(self, lab, form: list, const) -> complex:
        """sqrt([sum a*l_v + const]) in canonical orientation (see module doc)."""
        form = sorted(form, key=lambda t: (-t[1][1], t[1][0]))
        flip = form[0][0] < 0
        if flip:
            form = [(-a, v) for a, v in form]
            const = -const
        value = self.qn(sum(a * self.l(lab, *v) for a, v in form) + const)
        key = (tuple(form), const, tuple(self.entry_token(lab, *v) for _, v in form))
        root = self.sqrt(value, key)
        return 1j * root if flip else root

    # A^j_{2p}(xi) and B^j_{2p-1}(xi); None when a numerator factor vanishes
    def A(self, lab, j: int, p: int):
        J = (j, 2 * p)
        num = []
        for i in range(1, p + 1):
            U = (i, 2 * p + 1)
            num += [([(1, U), (1, J)], 0), ([(1, U), (-1, J)], -1)]
        for i in range(1, p):
            U = (i, 2 * p - 1)
            num += [([(1, U), (1, J)], 0), ([(1, U), (-1, J)], -1)]
        den = []
        for i in range(1, p + 1):
            if i != j:
                I = (i, 2 * p)
                den += [([(1, I), (1, J)], 0), ([(1, I), (-1, J)], 0), ([(1, I), (1, J)], 1), ([(1, I), (-1, J)], -1)]
        return self._ratio(lab, num, den, ("A", j, 2 * p))

    def B(self, lab, j: int, p: int):
        J = (j, 2 * p - 1)
        num = []
        for i in range(1, p + 1):
            U = (i, 2 * p)
            num += [([(1, U), (1, J)], 0), ([(1, U), (-1, J)], 0)]
        for i in range(1, p):
            U = (i, 2 * p - 2)
            num += [([(1, U), (1, J)], 0), ([(1, U), (-1, J)], 0)]
        den = []
        for i in range(1, p):
            if i != j:
                I = (i, 2 * p - 1)
                den += [([(1, I), (1, J)], 0), ([(1, I), (-1, J)], 0), ([(1, I), (1, J)], -1), ([(1, I), (-1, J)], -1)]
        return self._ratio(lab, num, den, ("B", j, 2 * p - 1))

    def _ratio(self, lab, num, den, what):
        top = 1
        for form, c0 in num:
            top *= self.root_factor(lab, form, c0)
        if abs(top) < DEGENERACY_TOL:
            return 0
        bot = 1
        for form, c0 in den:
            bot *= self.root_factor(lab, form, c0)
        if abs(bot) < DEGENERACY_TOL:
            raise DegenerateDenominator(f"{what[0]}^{what[1]}_{what[2]} has a vanishing denominator")
        return top / bot

    def C(self, lab, p: int, bracket=None) -> complex:
        br = bracket or self.qn
        num = 1
        for s_ in range(1, p + 1):
            num *= br(self.l(lab, s_, 2 * p))
        for s_ in range(1, p):
            num *= br(self.l(lab, s_, 2 * p - 2))
        if abs(num) < DEGENERACY_TOL:
            return 0
        den = 1
        for s_ in range(1, p):
            den *= br(self.l(lab, s_, 2 * p - 1)) * br(self.l(lab, s_, 2 * p - 1) - 1)
        if abs(den) < DEGENERACY_TOL:
            raise DegenerateDenominator(f"C_{2 * p - 1} has a vanishing denominator")
        return num / den

    def D(self, lab, p: int) -> complex:
        num = 1
        for i in range(1, p + 1):
            num *= self.qn(self.l(lab, i, 2 * p + 1) - 0.5)
        for i in range(1, p):
            num *= self.qn(self.l(lab, i, 2 * p - 1) - 0.5)
        den = 1
        for i in range(1, p):
            den *= self.qn(self.l(lab, i, 2 * p) + 0.5) * self.qn(self.l(lab, i, 2 * p) - 0.5)
        if abs(den) < DEGENERACY_TOL:
            raise DegenerateDenominator(f"D_{2 * p} has a vanishing denominator")
        return num / den


def _nonzero(x: complex, what: str) -> complex:
    if abs(x) < DEGENERACY_TOL:
        raise DegenerateDenominator(f"{what} vanishes")
    return x


# ---------------------------------------------------------------------------
# Matrices


@dataclass
class RepMatrices:
    spec: RepSpec
    tableaux: list
    gens: dict  # j -> T(I_{j,j-1})
    lifted: dict = field(default_factory=dict)  # (k, l, sign) -> matrix
    labels: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.tableaux)

    @property
    def n(self) -> int:
        return self.spec.n

    def q(self) -> complex:
        return cmath.exp(2j * math.pi * self.spec.s / self.spec.k)

    def v(self) -> complex:
        return cmath.exp(1j * math.pi * self.spec.s / self.spec.k)

    def root(self, k: int, l: int, sign: int = 1) -> np.ndarray:
        if k == l + 1:
            return self.gens[k]
        if (k, l, sign) not in self.lifted:
            lift_all_roots(self)
        return self.lifted[(k, l, sign)]

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "dim": self.dim,
            "basis": [str(t) for t in self.tableaux],
            "matrices": {
                f"{j},{j - 1}": [[[z.real, z.imag] for z in row] for row in m] for j, m in sorted(self.gens.items())
            },
        }


def _check_class(spec: RepSpec, *allowed: str):
    if spec.cls not in allowed:
        raise SpecError([f"class: expected {' or '.join(allowed)}, got {spec.cls!r}"])


def _build_so_type(spec: RepSpec, sqrt: SqrtCache | None = None) -> RepMatrices:
    """Shared builder for the cyclic, partial and nonclassical classes."""
    n = spec.n
    basis = _Basis(spec, enumerate_labels(spec))
    co = _Coeffs(spec, basis, sqrt)
    d = len(basis)
    cut = spec.cutoff
    nonclassical_from = 2 * cut + 2 if spec.cls == "nonclassical" else n + 1

    def cc(j, r):
        return spec.c[(j, r)] if j <= cut else 1.0

    gens = {}
    for g in range(2, n + 1):
        T = np.zeros((d, d), dtype=complex)
        nc = g >= nonclassical_from
        for a, lab in enumerate(basis.labels):
            if g % 2:  # I_{2p+1,2p}
                p = (g - 1) // 2
                for j in range(1, p + 1):
                    lj = co.l(lab, j, 2 * p)
                    den = co.qp(lj) - co.qp(-lj) if nc else co.qp(lj) + co.qp(-lj)
                    den = _nonzero(den, f"denominator for I_{g},{g - 1} at entry {j}")
                    up = basis.shift(lab, j, 2 * p, 1)
                    if up is not None:
                        T[basis.index[up], a] += cc(j, 2 * p) * co.A(lab, j, p) / den
                    dn = basis.shift(lab, j, 2 * p, -1)
                    if dn is not None:
                        T[basis.index[dn], a] -= co.A(dn, j, p) / cc(j, 2 * p) / den
                if nc and basis.value(lab, p, 2 * p) == Fraction(1, 2):
                    T[a, a] += spec.epsilon[g] / (co.qp(0.5) - co.qp(-0.5)) * co.D(lab, p)
            else:  # I_{2p,2p-1}
                p = g // 2
                br = co.qplus if nc else co.qn
                for j in range(1, p):
                    lj = co.l(lab, j, 2 * p - 1)
                    up = basis.shift(lab, j, 2 * p - 1, 1)
                    if up is not None:
                        den = _nonzero(co.qn(2 * lj - 1) * br(lj), f"denominator for I_{g},{g - 1}")
                        T[basis.index[up], a] += cc(j, 2 * p - 1) * co.B(lab, j, p) / den
                    dn = basis.shift(lab, j, 2 * p - 1, -1)
                    if dn is not None:
                        den = _nonzero(co.qn(2 * lj - 1) * br(lj - 1), f"denominator for I_{g},{g - 1}")
                        T[basis.index[dn], a] -= co.B(dn, j, p) / cc(j, 2 * p - 1) / den
                if nc:
                    T[a, a] += spec.epsilon[g] * co.C(lab, p, co.qplus)
                else:
                    T[a, a] += 1j * co.C(lab, p)
        gens[g] = T
    return RepMatrices(spec, [basis.tableau(x) for x in basis.labels], gens, labels=basis.labels)


def build_cyclic(spec: RepSpec, sqrt: SqrtCache | None = None) -> RepMatrices:
    _check_class(spec, "cyclic")
    spec.validate()
    return _build_so_type(spec, sqrt)


def build_partial(spec: RepSpec, sqrt: SqrtCache | None = None) -> RepMatrices:
    _check_class(spec, "partial")
    spec.validate()
    return _build_so_type(spec, sqrt)


def build_nonclassical(spec: RepSpec, sqrt: SqrtCache | None = None) -> RepMatrices:
    """Operators taken verbatim from the stated formulas for this family.

    Generators I_{j,j-1} with j <= 2i+1 use the cyclic formulas; those with
    j >= 2i+2 use the modified ones (denominators q^l - q^-l, [.]_+ brackets,
    the 1/2-boundary term and the signs epsilon_j).  These are not guaranteed
    to satisfy the defining relations; check with ``verify.check_relations``.
    """
    _check_class(spec, "nonclassical")
    spec.validate()
    return _build_so_type(spec, sqrt)


def build_minimal(spec: RepSpec, sqrt: SqrtCache | None = None) -> RepMatrices:
    """Representation on the k^(n-1)-dimensional space |m_n, m_{n-1}, ..., m_2>.

    For r >= 2, I_{r+1,r} shifts m_r by +-1 with the two-term formula; m_1 is
    read as 1/2 and I_{21} acts diagonally by i[m_2 - 1/2].
    """
    _check_class(spec, "minimal")
    spec.validate()
    n = spec.n
    basis = _Basis(spec, enumerate_labels(spec))
    co = _Coeffs(spec, basis, sqrt)

    def m(lab, r):
        if r == 1:
            return 0.5
        return basis.value(lab, 1, r)

    def root(lab, coeffs: dict, const) -> complex:
        rows = sorted(coeffs, reverse=True)
        flip = coeffs[rows[0]] < 0
        if flip:
            coeffs = {r: -a for r, a in coeffs.items()}
            const = -const
        val = co.qn(sum(a * m(lab, r) for r, a in coeffs.items()) + const)
        toks = tuple(("m1",) if r == 1 else co.entry_token(lab, 1, r) for r in sorted(coeffs))
        key = ("min", tuple(sorted(coeffs.items())), const, toks)
        x = co.sqrt(val, key)
        return 1j * x if flip else x

    def raise_coeff(lab, r):
        num = (root(lab, {r + 1: 1, r: 1}, r - 2) * root(lab, {r + 1: 1, r: -1}, 0)
               * root(lab, {r: 1, r - 1: 1}, r - 3) * root(lab, {r: 1, r - 1: -1}, 1))
        if abs(num) < DEGENERACY_TOL:
            return 0
        den = root(lab, {r: 2}, r - 1) * root(lab, {r: 2}, r - 3)
        return num / _nonzero(den, f"minimal denominator at row {r}")

    d = len(basis)
    gens = {}
    for g in range(2, n + 1):
        r = g - 1
        T = np.zeros((d, d), dtype=complex)
        for a, lab in enumerate(basis.labels):
            if r == 1:
                T[a, a] = 1j * co.qn(m(lab, 2) - 0.5)
                continue
            c = spec.c[(1, r)]
            up = basis.shift(lab, 1, r, 1)
            T[basis.index[up], a] += c * raise_coeff(lab, r)
            dn = basis.shift(lab, 1, r, -1)
            T[basis.index[dn], a] -= raise_coeff(dn, r) / c
        gens[g] = T
    return RepMatrices(spec, [basis.tableau(x) for x in basis.labels], gens, labels=basis.labels)


BUILDERS = {
    "cyclic": build_cyclic,
    "partial": build_partial,
    "minimal": build_minimal,
    "nonclassical": build_nonclassical,
}


def build(spec: RepSpec, sqrt: SqrtCache | None = None) -> RepMatrices:
    return BUILDERS[spec.cls](spec, sqrt)


def lift_all_roots(rm: RepMatrices) -> RepMatrices:
    """T(I+-_{kl}) = q^{+-1/2} T(I_{l+1,l}) T(I_{k,l+1}) - q^{-+1/2} T(I_{k,l+1}) T(I_{l+1,l})."""
    v = rm.v()
    for sign in (1, -1):
        w = v if sign > 0 else 1 / v
        for gap in range(2, rm.n):
            for l in range(1, rm.n - gap + 1):
                k = l + gap
                a = rm.gens[l + 1]
                b = rm.gens[k] if k == l + 2 else rm.lifted[(k, l + 1, sign)]
                rm.lifted[(k, l, sign)] = w * (a @ b) - (b @ a) / w
    return rm


def direct_sum(*reps: RepMatrices) -> RepMatrices:
    """Block-diagonal sum (spec and labels taken from the first summand)."""
    n = reps[0].n
    gens = {}
    for g in range(2, n + 1):
        blocks = [r.gens[g] for r in reps]
        d = sum(b.shape[0] for b in blocks)
        T = np.zeros((d, d), dtype=complex)
        o = 0
        for b in blocks:
            T[o:o + b.shape[0], o:o + b.shape[0]] = b
            o += b.shape[0]
        gens[g] = T
    tabs = [t for r in reps for t in r.tableaux]
    return RepMatrices(reps[0].spec, tabs, gens)


def conjugate(rm: RepMatrices, A: np.ndarray) -> RepMatrices:
    """The equivalent representation A T(.) A^-1."""
    Ai = np.linalg.inv(A)
    gens = {g: A @ T @ Ai for g, T in rm.gens.items()}
    return RepMatrices(rm.spec, list(rm.tableaux), gens, labels=list(rm.labels))


# ---------------------------------------------------------------------------
# Random parameters


def _rand_c(rng: random.Random, k: int) -> complex:
    return rng.uniform(0.5, 2.0) * cmath.exp(1j * rng.uniform(0, 2 * math.pi / k))


def _rand_h_row(rng: random.Random, count: int) -> list[complex]:
    """Entries in (0, 1/4) with strictly decreasing real parts."""
    re = sorted((rng.uniform(0.01, 0.24) for _ in range(count)), reverse=True)
    return [complex(x, rng.uniform(-0.3, 0.3)) for x in re]


def random_cyclic_spec(n: int, k: int, seed: int | None = None, s: int = 1) -> RepSpec:
    """A random generic cyclic spec whose parameters are dominant."""
    rng = random.Random(seed)
    for _ in range(1000):
        p = half(n)
        # top-row l-coordinates in (0, k/4), decreasing real parts
        re = sorted((rng.uniform(0.02, k / 4 - 0.02) for _ in range(p)), reverse=True)
        ls = [complex(x, rng.uniform(-0.3, 0.3)) for x in re]
        m_n = [ls[j - 1] - (l_coordinate(j, n, 0)) for j in range(1, p + 1)]
        h, c = {}, {}
        for r in range(2, n):
            row = _rand_h_row(rng, half(r))
            for j, x in enumerate(row, 1):
                h[(j, r)] = x
                c[(j, r)] = _rand_c(rng, k)
        spec = RepSpec("cyclic", n, k, s, m_n, c, h)
        if not spec.problems():
            return spec
    raise RuntimeError("could not draw a generic spec")


def random_minimal_spec(n: int, k: int, seed: int | None = None, s: int = 1) -> RepSpec:
    rng = random.Random(seed)
    for _ in range(1000):
        m_n = [complex(rng.uniform(0.02, 0.23), rng.uniform(-0.3, 0.3))]
        h = {(1, r): complex(rng.uniform(0.02, 0.23), rng.uniform(-0.3, 0.3)) for r in range(2, n)}
        c = {(1, r): _rand_c(rng, k) for r in range(2, n)}
        spec = RepSpec("minimal", n, k, s, m_n, c, h)
        if not spec.problems():
            return spec
    raise RuntimeError("could not draw a generic spec")


def random_partial_spec(n: int, k: int, cutoff: int, tail: Sequence, seed: int | None = None,
                        s: int = 1, cls: str = "partial", epsilon: dict | None = None) -> RepSpec:
    rng = random.Random(seed)
    tail = [Fraction(x) for x in tail]
    for _ in range(1000):
        m_n = [complex(rng.uniform(0.02, 0.23), rng.uniform(-0.3, 0.3)) for _ in range(cutoff)] + list(tail)
        h, c = {}, {}
        for r in range(2, n):
            for j in range(1, min(cutoff, half(r)) + 1):
                h[(j, r)] = complex(rng.uniform(0.02, 0.23), rng.uniform(-0.3, 0.3))
                c[(j, r)] = _rand_c(rng, k)
        eps = {}
        if cls == "nonclassical":
            eps = epsilon or {j: rng.choice((1, -1)) for j in range(2 * cutoff + 2, n + 1)}
        spec = RepSpec(cls, n, k, s, m_n, c, h, cutoff, eps)
        probs = spec.problems()
        if not probs:
            return spec
        if any(not p.startswith("genericity") for p in probs):
            raise SpecError(probs)
    raise RuntimeError("could not draw a generic spec")


def valid_tails(n: int, k: int, cutoff: int, cls: str = "partial", limit: int = 6) -> list[tuple]:
    """All admissible top-row tails (entries cutoff+1..n/2) with entries <= limit."""
    count = half(n) - cutoff
    out = []
    starts = (Fraction(1, 2),) if cls == "nonclassical" else (Fraction(0), Fraction(1, 2))
    for start in starts:
        vals = [start + t for t in range(limit + 1)]
        if cls == "partial" and n % 2 == 0:
            vals = sorted(set(vals) | {-x for x in vals})
        for combo in itertools.product(vals, repeat=count):
            m_n = [0.1 + 0.1j] * cutoff + list(combo)
            spec = RepSpec(cls, n, k, 1, m_n, {}, {}, cutoff, {})
            if not spec._tail_problems():
                out.append(tuple(combo))
    return sorted(set(out))


def so2_action_exact(m: Fraction, k: int, s: int = 1) -> CyclotomicScalar:
    """i[m] in Q(zeta), zeta = exp(2 pi i s / 4k), for m with 4m an integer.

    This is the one-dimensional representation for n = 2: with q = zeta^4,
    q^(1/4) = zeta and i = zeta^k all lie in the field.
    """
    check_root_spec(k, s)
    m = Fraction(m)
    if (4 * m).denominator != 1:
        raise ValueError("exact evaluation needs 4m to be an integer")
    order = 4 * k
    z = lambda e: CyclotomicScalar.zeta_power(order, (s * e) % order)
    a = int(4 * m)
    return z(k) * (z(a) - z(-a)) / (z(4) - z(-4))
