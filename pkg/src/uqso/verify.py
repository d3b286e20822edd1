"""Numerical checks on representation matrices."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .pbw import central_coefficients
from .reps import (RepMatrices, RepSpec, SpecError, build_cyclic, half, l_coordinate,
                   lift_all_roots)
from .scalars import ComplexDomain

DEFAULT_TOL = 1e-9
NULLITY_TOL = 1e-8
MAX_SYLVESTER_DIM = 40


class IllConditioned(ArithmeticError):
    """Singular values too close to the rank threshold to decide a nullity."""


# ---------------------------------------------------------------------------
# Defining relations


@dataclass
class ResidualReport:
    residuals: dict  # relation label -> max |lhs - rhs|
    tol: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def ok(self) -> bool:
        return all(r < self.tol for r in self.residuals.values())

    def to_json(self) -> dict:
        return {"ok": self.ok, "tol": self.tol, "max_residual": self.max_residual,
                "residuals": {k: self.residuals[k] for k in sorted(self.residuals)}}


def _maxabs(m: np.ndarray) -> float:
    return float(np.abs(m).max()) if m.size else 0.0


def check_relations(rm: RepMatrices, tol: float = DEFAULT_TOL) -> ResidualReport:
    """Residuals of the q-Serre type relations and of the far commutations."""
    T, n = rm.gens, rm.n
    q = rm.q()
    two = q + 1 / q
    res = {}
    for i in range(2, n):
        a, b = T[i], T[i + 1]
        res[f"serre1[{i}]"] = _maxabs(a @ a @ b - two * (a @ b @ a) + b @ a @ a + b)
        res[f"serre2[{i}]"] = _maxabs(a @ b @ b - two * (b @ a @ b) + b @ b @ a + a)
    for i in range(2, n + 1):
        for j in range(i + 2, n + 1):
            res[f"commute[{i},{j}]"] = _maxabs(T[i] @ T[j] - T[j] @ T[i])
    return ResidualReport(res, tol)


# ---------------------------------------------------------------------------
# Central elements


def central_matrix(rm: RepMatrices, r: int, l: int, sign: int = 1) -> np.ndarray:
    """C^{(k)} evaluated on T(I+-_{rl})."""
    if not rm.lifted and r > l + 1:
        lift_all_roots(rm)
    x = rm.root(r, l, sign)
    dom = ComplexDomain(rm.spec.k, rm.spec.s)
    out = np.zeros_like(x)
    powers = {0: np.eye(x.shape[0], dtype=complex)}
    for p in range(1, rm.spec.k + 1):
        powers[p] = powers[p - 1] @ x
    for p, c in central_coefficients(rm.spec.k, dom):
        out = out + c * powers[p]
    return out


def check_central_action(rm: RepMatrices, r: int, l: int, tol: float = DEFAULT_TOL,
                         sign: int = 1) -> tuple[bool, complex]:
    """Is C^{(k)}(T(I_{rl})) a multiple of the identity?  Returns (flag, scalar).

    The deviation from scalar is measured relative to max(1, |scalar|).
    """
    m = central_matrix(rm, r, l, sign)
    d = m.shape[0]
    lam = complex(np.trace(m) / d)
    dev = _maxabs(m - lam * np.eye(d))
    return dev < tol * max(1.0, abs(lam)), lam


# ---------------------------------------------------------------------------
# Commutants and intertwiners


def _null_space(blocks: list[np.ndarray], d1: int, d2: int, tol: float):
    if max(d1, d2) > MAX_SYLVESTER_DIM:
        raise ValueError(f"dimension {max(d1, d2)} too large for the dense Sylvester system "
                         f"(limit {MAX_SYLVESTER_DIM})")
    M = np.vstack(blocks)
    _, sv, vh = np.linalg.svd(M)
    smax = sv[0] if sv.size else 0.0
    if smax == 0:
        return [vh[i].reshape(d2, d1, order="F") for i in range(d1 * d2)], sv
    thr = tol * smax
    near = [s for s in sv if thr / 10 <= s <= thr * 10]
    if near:
        raise IllConditioned(f"singular values {near} within a factor 10 of the threshold {thr:.3g}")
    full = np.zeros(d1 * d2)
    full[:sv.size] = sv
    null = [vh[i].conj().reshape(d2, d1, order="F") for i in range(d1 * d2) if full[i] < thr]
    return null, sv


def intertwiner_space(rm1: RepMatrices, rm2: RepMatrices, tol: float = NULLITY_TOL) -> list[np.ndarray]:
    """Basis of {A : A T1(I_{j,j-1}) = T2(I_{j,j-1}) A for all j}."""
    if set(rm1.gens) != set(rm2.gens):
        raise ValueError("representations of different algebras")
    d1, d2 = rm1.dim, rm2.dim
    I1, I2 = np.eye(d1), np.eye(d2)
    blocks = [np.kron(rm1.gens[g].T, I2) - np.kron(I1, rm2.gens[g]) for g in sorted(rm1.gens)]
    null, _ = _null_space(blocks, d1, d2, tol)
    return null


def intertwiner_dimension(rm1: RepMatrices, rm2: RepMatrices, tol: float = NULLITY_TOL) -> int:
    return len(intertwiner_space(rm1, rm2, tol))


def commutant_dimension(rm: RepMatrices, tol: float = NULLITY_TOL) -> int:
    return intertwiner_dimension(rm, rm, tol)


# ---------------------------------------------------------------------------
# Branching to the subalgebra with one index fewer


@dataclass
class BranchingReport:
    ok: bool
    blocks: int
    expected_blocks: int
    block_dims: list
    max_mismatch: float
    max_off_block: float
    tol: float
    message: str = ""

    def to_json(self) -> dict:
        return dict(self.__dict__)


def restricted_spec(spec: RepSpec, offsets: tuple) -> RepSpec:
    """Spec of the summand labelled by m_{n-1} = h_{.,n-1} + offsets."""
    n = spec.n
    m = [spec.h[(j, n - 1)] + a for j, a in enumerate(offsets, 1)]
    c = {key: v for key, v in spec.c.items() if key[1] < n - 1}
    h = {key: v for key, v in spec.h.items() if key[1] < n - 1}
    return RepSpec("cyclic", n - 1, spec.k, spec.s, m, c, h)


def check_branching(rm: RepMatrices, tol: float = 1e-10) -> BranchingReport:
    spec = rm.spec
    if spec.cls != "cyclic" or spec.n < 3:
        raise SpecError(["branching needs a cyclic representation with n >= 3"])
    n = spec.n
    width = half(n - 1)
    groups: dict[tuple, list[int]] = {}
    for idx, lab in enumerate(rm.labels):
        groups.setdefault(tuple(lab[:width]), []).append(idx)
    expected = spec.k ** width
    owner = np.empty(rm.dim, dtype=int)
    for gi, idxs in enumerate(groups.values()):
        owner[idxs] = gi
    off = 0.0
    for g in range(2, n):
        T = rm.gens[g]
        mask = owner[:, None] != owner[None, :]
        if mask.any():
            off = max(off, float(np.abs(T[mask]).max()))
    worst, msg = 0.0, ""
    for key, idxs in groups.items():
        sub = build_cyclic(restricted_spec(spec, key))
        if sub.dim != len(idxs):
            return BranchingReport(False, len(groups), expected, [len(v) for v in groups.values()],
                                   math.inf, off, tol, f"block {key}: size {len(idxs)} vs {sub.dim}")
        for g in range(2, n):
            diff = _maxabs(rm.gens[g][np.ix_(idxs, idxs)] - sub.gens[g])
            if diff > worst:
                worst = diff
                if diff >= tol and not msg:
                    msg = f"block {key}, generator I_{g},{g - 1}: mismatch {diff:.3g}"
    if off >= tol:
        msg = msg or f"off-block entry of size {off:.3g}"
    ok = off < tol and worst < tol and len(groups) == expected
    if len(groups) != expected and not msg:
        msg = f"{len(groups)} blocks, expected {expected}"
    return BranchingReport(ok, len(groups), expected, [len(v) for v in groups.values()],
                           worst, off, tol, msg)


# ---------------------------------------------------------------------------
# Dominance


@dataclass(frozen=True)
class DominanceDomains:
    """Parameter domains for a given k; bound = k/4 for l-values and 1/4 for h-values."""

    k: int

    @staticmethod
    def _D(x: complex, b: float) -> bool:
        return abs(x.real) < b or (x.real == -b and x.imag <= 0) or (x.real == b and x.imag >= 0)

    @staticmethod
    def _Dpm(x: complex, b: float) -> bool:
        return 0 < x.real < b or (x.real == 0 and x.imag >= 0) or (x.real == b and x.imag >= 0)

    def in_D(self, x: complex) -> bool:
        return self._D(complex(x), self.k / 4)

    def in_Dpm(self, x: complex) -> bool:
        return self._Dpm(complex(x), self.k / 4)

    def in_Dh(self, x: complex) -> bool:
        return self._D(complex(x), 0.25)

    def in_Dpm_h(self, x: complex) -> bool:
        return self._Dpm(complex(x), 0.25)

    @staticmethod
    def succ(x: complex, y: complex) -> bool:
        x, y = complex(x), complex(y)
        return x.real > y.real or (x.real == y.real and x.imag > y.imag)


def _row_problems(vals: list, row: int, D, Dpm, label: str) -> list[str]:
    out = []
    p = len(vals)
    if row % 2:
        chain = vals
        for j, x in enumerate(vals, 1):
            if not Dpm(x):
                out.append(f"{label}[{j},{row}] = {x:.6g} not in the signed domain")
    else:
        for j, x in enumerate(vals[:-1], 1):
            if not Dpm(x):
                out.append(f"{label}[{j},{row}] = {x:.6g} not in the signed domain")
        last = vals[-1]
        if not D(last):
            out.append(f"{label}[{p},{row}] = {last:.6g} not in the strip domain")
        chain = vals[:-1] + [last if Dpm(last) else -last]
    for j in range(len(chain) - 1):
        if not DominanceDomains.succ(chain[j], chain[j + 1]):
            out.append(f"{label}[{j + 1},{row}] does not follow {label}[{j + 2},{row}] in the order")
    return out


def dominance_problems(spec: RepSpec) -> list[str]:
    if spec.cls != "cyclic":
        raise SpecError([f"class: dominance is defined for cyclic specs, got {spec.cls!r}"])
    dd = DominanceDomains(spec.k)
    n = spec.n
    out = []
    lvals = [complex(l_coordinate(j, n, spec.top(j))) for j in range(1, half(n) + 1)]
    out += _row_problems(lvals, n, dd.in_D, dd.in_Dpm, "l")
    for r in range(n - 1, 1, -1):
        hv = [complex(spec.h[(j, r)]) for j in range(1, half(r) + 1)]
        out += _row_problems(hv, r, dd.in_Dh, dd.in_Dpm_h, "h")
    bound = 2 * math.pi / spec.k
    for key in sorted(spec.c):
        arg = cmath.phase(spec.c[key]) % (2 * math.pi)
        if not 0 <= arg < bound:
            out.append(f"Arg c[{key[0]},{key[1]}] = {arg:.6g} outside [0, 2pi/k)")
    return out


def is_dominant(spec: RepSpec) -> bool:
    return not dominance_problems(spec)
