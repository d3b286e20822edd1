"""Degree-truncated noncommutative Buchberger completion.

Polynomials are dicts mapping words (tuples of small ints) to coefficients in
an exact field domain (``RationalFunctionDomain`` in practice).  The monomial
order is degree-lexicographic with letters compared as integers.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable

Word = tuple[int, ...]
Poly = dict


def word_key(w: Word):
    return (len(w), w)


def leading(f: Poly) -> Word:
    return max(f, key=word_key)


def _neg_key(w: Word):
    return (-len(w), tuple(-x for x in w))


def clean(domain, f: Poly) -> Poly:
    return {w: c for w, c in f.items() if not domain.is_zero(c)}


def add_into(domain, acc: Poly, g: Poly, c, left: Word = (), right: Word = ()):
    zero = domain.zero()
    for w, x in g.items():
        ww = left + w + right
        acc[ww] = acc.get(ww, zero) + c * x


@dataclass
class GroebnerBasis:
    """A (possibly truncated) Groebner basis with a reduction routine."""

    domain: object
    polys: list = field(default_factory=list)
    degree_bound: int | None = None

    def __post_init__(self):
        self._index: dict[Word, int] = {}
        self._lengths: set[int] = set()

    # -- bookkeeping ------------------------------------------------------
    def _rebuild(self):
        self._index = {leading(p): i for i, p in enumerate(self.polys)}
        self._lengths = {len(w) for w in self._index}

    @property
    def leading_words(self) -> list[Word]:
        return [leading(p) for p in self.polys]

    def _find_divisor(self, w: Word):
        for L in self._lengths:
            if L > len(w):
                continue
            for i in range(len(w) - L + 1):
                j = self._index.get(w[i:i + L])
                if j is not None:
                    return i, L, j
        return None

    def is_normal_word(self, w: Word) -> bool:
        return self._find_divisor(w) is None

    # -- reduction --------------------------------------------------------
    def reduce(self, f: Poly) -> Poly:
        dom = self.domain
        zero = dom.zero()
        work = dict(f)
        heap = [(_neg_key(w), w) for w in work]
        heapq.heapify(heap)
        out: Poly = {}
        while heap:
            _, w = heapq.heappop(heap)
            c = work.pop(w, None)
            if c is None or dom.is_zero(c):
                continue
            hit = self._find_divisor(w)
            if hit is None:
                out[w] = c
                continue
            i, L, j = hit
            g = self.polys[j]
            left, right = w[:i], w[i + L:]
            lw = w[i:i + L]
            for gw, gc in g.items():
                if gw == lw:
                    continue
                ww = left + gw + right
                if ww not in work:
                    work[ww] = zero
                    heapq.heappush(heap, (_neg_key(ww), ww))
                work[ww] = work[ww] - c * gc
        return out

    # -- completion -------------------------------------------------------
    def _monic(self, f: Poly) -> Poly:
        lw = leading(f)
        inv = self.domain.inv(f[lw])
        return {w: c * inv for w, c in f.items()}

    def _overlaps(self, a: Word, b: Word):
        # proper overlaps: suffix of a equals prefix of b
        for ov in range(1, min(len(a), len(b))):
            if a[-ov:] == b[:ov]:
                yield a + b[ov:], a, b, ov

    def complete(self, generators: Iterable[Poly], degree_bound: int, verbose: bool = False):
        self.degree_bound = degree_bound
        pending = [clean(self.domain, g) for g in generators]
        pairs: list = []
        counter = 0

        def add(f):
            nonlocal counter
            f = self.reduce(f)
            if not f:
                return
            f = self._monic(f)
            lw = leading(f)
            # drop older elements whose leading word contains lw, re-queue them
            keep, requeue = [], []
            for p in self.polys:
                pl = leading(p)
                if _contains(pl, lw):
                    requeue.append(p)
                else:
                    keep.append(p)
            self.polys = keep + [f]
            self._rebuild()
            for p in self.polys:
                pl = leading(p)
                for a, b in ((pl, lw), (lw, pl)) if pl != lw else ((lw, lw),):
                    for ow, x, y, ov in self._overlaps(a, b):
                        if len(ow) <= degree_bound:
                            counter += 1
                            heapq.heappush(pairs, (len(ow), counter, x, y, ov))
            for p in requeue:
                add(p)

        for g in pending:
            add(g)
        while pairs:
            _, _, a, b, ov = heapq.heappop(pairs)
            ia, ib = self._index.get(a), self._index.get(b)
            if ia is None or ib is None:
                continue
            f, g = self.polys[ia], self.polys[ib]
            s: Poly = {}
            one = self.domain.one()
            add_into(self.domain, s, f, one, (), b[ov:])
            add_into(self.domain, s, g, -one, a[:len(a) - ov], ())
            s = clean(self.domain, s)
            if s:
                add(s)
        return self


def _contains(w: Word, sub: Word) -> bool:
    L = len(sub)
    if L >= len(w):
        return False
    return any(w[i:i + L] == sub for i in range(len(w) - L + 1))
