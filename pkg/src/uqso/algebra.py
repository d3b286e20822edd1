"""Finite linear combinations of words over an arbitrary coefficient domain."""
from __future__ import annotations

from typing import Callable, Hashable, Iterable, Mapping

Word = tuple


class Element:
    """Immutable map word -> nonzero coefficient, words being tuples of letters."""

    __slots__ = ("domain", "terms")

    def __init__(self, domain, terms: Mapping[Word, object] | None = None):
        self.domain = domain
        clean = {}
        if terms:
            for w, c in terms.items():
                if not domain.is_zero(c):
                    clean[tuple(w)] = c
        self.terms = clean

    @classmethod
    def word(cls, domain, word: Iterable, coeff=None) -> "Element":
        return cls(domain, {tuple(word): domain.one() if coeff is None else coeff})

    @classmethod
    def scalar(cls, domain, coeff) -> "Element":
        return cls(domain, {(): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def _check(self, other: "Element"):
        if not isinstance(other, Element):
            raise TypeError(f"cannot combine Element with {type(other).__name__}")
        if other.domain != self.domain:
            raise ValueError(f"domain mismatch: {self.domain} vs {other.domain}")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        out = dict(self.terms)
        zero = self.domain.zero()
        for w, c in other.terms.items():
            out[w] = out.get(w, zero) + c
        return Element(self.domain, out)

    def __neg__(self) -> "Element":
        return Element(self.domain, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __mul__(self, other) -> "Element":
        if isinstance(other, Element):
            self._check(other)
            out: dict = {}
            zero = self.domain.zero()
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    out[w] = out.get(w, zero) + c1 * c2
            return Element(self.domain, out)
        return self.scale(other)

    def __rmul__(self, c) -> "Element":
        return self.scale(c)

    def scale(self, c) -> "Element":
        return Element(self.domain, {w: c * x for w, x in self.terms.items()})

    def __pow__(self, n: int) -> "Element":
        out = Element.scalar(self.domain, self.domain.one())
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element) or other.domain != self.domain:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.domain.is_zero(c - other.terms[w]) for w, c in self.terms.items())

    def __hash__(self):
        raise TypeError("Element is not hashable")

    def map_letters(self, f: Callable[[Hashable], Hashable]) -> "Element":
        out: dict = {}
        zero = self.domain.zero()
        for w, c in self.terms.items():
            nw = tuple(f(x) for x in w)
            out[nw] = out.get(nw, zero) + c
        return Element(self.domain, out)

    def map_coeffs(self, domain, f: Callable) -> "Element":
        return Element(domain, {w: f(c) for w, c in self.terms.items()})

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({self.domain.fmt(c)})*{list(w)}" for w, c in self.terms.items())


def linear_combination(domain, pieces: Iterable[tuple[object, Element]]) -> Element:
    out = Element(domain)
    for c, e in pieces:
        out = out + e.scale(c)
    return out
