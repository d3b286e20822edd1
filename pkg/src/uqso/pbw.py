"""PBW rewriting for the nonstandard q-deformed algebra U'_q(so_n).

Letters are :class:`Gen` values ``I^{sign}_{k,l}`` with ``k > l``.  A simple
generator ``I_{l+1,l}`` carries no sign (it is stored with ``sign=+1``).

Ordering used throughout: ``I_{m,p} < I_{k,l}`` iff ``p < l`` or
(``p == l`` and ``m < k``).  A word is in normal form iff it is non-decreasing.
Every descending adjacent pair matches exactly one rewriting rule, listed in
:func:`pair_rule`.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, NamedTuple

from .algebra import Element
from .scalars import (
    ComplexDomain,
    CyclotomicDomain,
    LaurentDomain,
    LaurentScalar,
    RationalFunctionDomain,
    lq,
)


class Gen(NamedTuple):
    k: int
    l: int
    sign: int = 1

    @property
    def simple(self) -> bool:
        return self.k == self.l + 1

    @property
    def key(self) -> tuple[int, int]:
        return (self.l, self.k)

    def __str__(self):
        name = "I" if self.sign > 0 else "J"
        return f"{name}({self.k},{self.l})"


def gen(k: int, l: int, sign: int = 1) -> Gen:
    """Canonical letter; simple generators are sign-neutral."""
    if not k > l >= 1:
        raise ValueError(f"need k > l >= 1, got ({k},{l})")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return Gen(k, l, 1 if k == l + 1 else sign)


def precedes(x: Gen, y: Gen) -> bool:
    """Strict order x < y."""
    return x.key < y.key


def is_normal_word(word: Iterable[Gen]) -> bool:
    w = list(word)
    return all(a.key <= b.key for a, b in zip(w, w[1:]))


def word_sign(word: Iterable[Gen]) -> int:
    signs = {g.sign for g in word if not g.simple}
    if len(signs) > 1:
        raise ValueError("word mixes I+ and I- root elements")
    return signs.pop() if signs else 1


def element_sign(x: Element) -> int:
    signs = {word_sign(w) for w in x.terms} - {1} if x.terms else set()
    nonsimple = {g.sign for w in x.terms for g in w if not g.simple}
    if len(nonsimple) > 1:
        raise ValueError("element mixes I+ and I- root elements")
    return nonsimple.pop() if nonsimple else 1


# ---------------------------------------------------------------------------
# The rewriting rules

RULE_NAMES = ("same-second", "chain", "same-first", "disjoint", "nested", "crossing")


@lru_cache(maxsize=None)
def pair_rule(x: Gen, y: Gen, sign: int = 1):
    """Rewrite the descending pair ``x y`` (requires ``y < x``).

    Returns ``(rule_name, [(LaurentScalar, word), ...])`` for the + system; the
    - system substitutes q -> 1/q.  With ``x = I_{a,b}``, ``y = I_{c,d}``:

    * b == d, a > c:           I_ab I_cb = q^-1 I_cb I_ab + q^-1/2 I_ac
    * c == b:                  I_ab I_bd = q I_bd I_ab - q^1/2 I_ad
    * a == c, b > d:           I_ab I_ad = q^-1 I_ad I_ab + q^-1/2 I_bd
    * a > b > c > d:           commute
    * c > a > b > d:           commute
    * a > c > b > d:           I_ab I_cd = I_cd I_ab + (q - q^-1)(I_bd I_ac - I_ad I_cb)
    """
    if not y.key < x.key:
        raise ValueError(f"{x}{y} is not a descending pair")
    a, b = x.k, x.l
    c, d = y.k, y.l
    g = lambda p, r: gen(p, r, sign)
    if b == d:
        name = "same-second"
        rhs = [(lq(-1), (y, x)), (lq(Fraction(-1, 2)), (g(a, c),))]
    elif c == b:
        name = "chain"
        rhs = [(lq(1), (y, x)), (-lq(Fraction(1, 2)), (g(a, d),))]
    elif a == c:
        name = "same-first"
        rhs = [(lq(-1), (y, x)), (lq(Fraction(-1, 2)), (g(b, d),))]
    elif b > c:
        name = "disjoint"
        rhs = [(LaurentScalar.const(1), (y, x))]
    elif c > a:
        name = "nested"
        rhs = [(LaurentScalar.const(1), (y, x))]
    else:
        name = "crossing"
        t = lq(1) - lq(-1)
        rhs = [
            (LaurentScalar.const(1), (y, x)),
            (t, (g(b, d), g(a, c))),
            (-t, (g(a, d), g(c, b))),
        ]
    if sign < 0:
        rhs = [(c_.invert_v(), w) for c_, w in rhs]
    return name, tuple(rhs)


def _neg_key(word: tuple[Gen, ...]):
    return (-len(word), tuple((-g.l, -g.k) for g in word))


class _RuleCache:
    """Rule right-hand sides converted to a given coefficient domain."""

    def __init__(self, domain, sign):
        self.domain, self.sign = domain, sign
        self._memo = {}

    def __call__(self, x: Gen, y: Gen):
        hit = self._memo.get((x, y))
        if hit is None:
            _, rhs = pair_rule(x, y, self.sign)
            hit = [(self.domain.from_laurent(c), w) for c, w in rhs]
            self._memo[(x, y)] = hit
        return hit


_rule_caches: dict = {}


def _rules_for(domain, sign):
    key = (domain, sign)
    if key not in _rule_caches:
        _rule_caches[key] = _RuleCache(domain, sign)
    return _rule_caches[key]


def first_descent(word: tuple[Gen, ...]) -> int | None:
    for i in range(len(word) - 1):
        if word[i + 1].key < word[i].key:
            return i
    return None


def rewrite_at(x: Element, word: tuple[Gen, ...], i: int, sign: int | None = None) -> Element:
    """One rewriting step applied to the pair at position i of ``word``."""
    sign = word_sign(word) if sign is None else sign
    rules = _rules_for(x.domain, sign)
    out = {}
    for c, w in rules(word[i], word[i + 1]):
        out[word[:i] + w + word[i + 2:]] = c
    return Element(x.domain, out)


def normal_form(x: Element, sign: int | None = None) -> Element:
    """PBW normal form.

    Words are processed from the largest in the (length, lex) order downward;
    in each the leftmost descending pair is rewritten.  Every rewrite produces
    strictly smaller words, so each word is visited at most once.
    """
    dom = x.domain
    if not dom.exact and not isinstance(dom, ComplexDomain):
        raise ValueError("normal_form needs an exact or complex coefficient domain")
    sign = element_sign(x) if sign is None else sign
    rules = _rules_for(dom, sign)
    zero = dom.zero()
    work = dict(x.terms)
    heap = [(_neg_key(w), w) for w in work]
    heapq.heapify(heap)
    out = {}
    while heap:
        _, w = heapq.heappop(heap)
        c = work.pop(w, None)
        if c is None or dom.is_zero(c):
            continue
        i = first_descent(w)
        if i is None:
            out[w] = c
            continue
        for rc, rw in rules(w[i], w[i + 1]):
            nw = w[:i] + rw + w[i + 2:]
            if nw not in work:
                work[nw] = zero
                heapq.heappush(heap, (_neg_key(nw), nw))
            work[nw] = work[nw] + c * rc
    return Element(dom, out)


def monomial(domain, *letters: Gen, coeff=None) -> Element:
    return Element.word(domain, letters, coeff)


def generators(n: int, sign: int = 1) -> list[Gen]:
    """All root letters I_{kl}, 1 <= l < k <= n, in increasing order."""
    return sorted((gen(k, l, sign) for k in range(2, n + 1) for l in range(1, k)), key=lambda g: g.key)


# ---------------------------------------------------------------------------
# Root elements in terms of simple generators


def root_element(k: int, l: int, sign: int = 1, domain=None) -> Element:
    """I^{sign}_{kl} expanded in the generators I_{j,j-1}.

    I+_{kl} = q^{1/2} I_{l+1,l} I+_{k,l+1} - q^{-1/2} I+_{k,l+1} I_{l+1,l};
    I- is the same with q -> 1/q.
    """
    domain = domain or LaurentDomain()
    if not k > l >= 1:
        raise ValueError(f"need k > l >= 1, got ({k},{l})")
    if k == l + 1:
        return monomial(domain, gen(k, l))
    half = Fraction(sign, 2)
    g = monomial(domain, gen(l + 1, l))
    inner = root_element(k, l + 1, sign, domain)
    return (g * inner).scale(domain.from_laurent(lq(half))) - (inner * g).scale(domain.from_laurent(lq(-half)))


# ---------------------------------------------------------------------------
# Confluence


def descending_triples(n: int, sign: int = 1):
    gs = generators(n, sign)
    for a, b, c in itertools.combinations(reversed(gs), 3):
        yield a, b, c


def ambiguity_type(a: Gen, b: Gen, c: Gen) -> tuple[int, ...]:
    """Equality/inequality pattern of the six indices (dense ranks)."""
    idx = (a.k, a.l, b.k, b.l, c.k, c.l)
    ranks = {v: r for r, v in enumerate(sorted(set(idx)))}
    return tuple(ranks[v] for v in idx)


@dataclass
class ConfluenceReport:
    n: int
    triples: int
    types: set
    failures: list
    reference_type_count: int = 66

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def type_count(self) -> int:
        return len(self.types)

    def summary(self) -> str:
        status = "all resolvable" if self.ok else f"{len(self.failures)} unresolved"
        note = "" if self.type_count == self.reference_type_count else f" (reference count {self.reference_type_count})"
        return f"n={self.n}: {self.triples} overlap triples, {self.type_count} ambiguity types, {status}{note}"


def resolve_triple(a: Gen, b: Gen, c: Gen, domain=None, sign: int = 1):
    """Reduce ``a b c`` starting from the left pair and from the right pair."""
    domain = domain or LaurentDomain()
    word = (a, b, c)
    x = monomial(domain, *word)
    left = normal_form(rewrite_at(x, word, 0, sign), sign)
    right = normal_form(rewrite_at(x, word, 1, sign), sign)
    return left, right


def check_confluence(n: int, domain=None, sign: int = 1, cumulative: bool = True) -> ConfluenceReport:
    """Resolve every overlap ambiguity among letters with indices <= n.

    With ``cumulative`` the type set is collected over all n' <= n (the same
    triples appear for every n' anyway, so this only matters for reporting).
    """
    if n < 3:
        raise ValueError("confluence needs n >= 3")
    domain = domain or LaurentDomain()
    types, failures, count = set(), [], 0
    for a, b, c in descending_triples(n, sign):
        count += 1
        types.add(ambiguity_type(a, b, c))
        left, right = resolve_triple(a, b, c, domain, sign)
        if not left == right:
            failures.append(((a, b, c), left, right))
    return ConfluenceReport(n, count, types, failures)


# ---------------------------------------------------------------------------
# Counting normal monomials


def count_bounded_normal_monomials(n: int, k: int) -> int:
    """Number of normal words with every letter exponent < k, found by enumeration.

    Each exponent vector yields the ordered word; we confirm it is normal and
    fixed by ``normal_form`` before counting it, and that distinct vectors give
    distinct words.
    """
    gs = generators(n)
    dom = LaurentDomain()
    seen = set()
    for exps in itertools.product(range(k), repeat=len(gs)):
        word = tuple(g for g, e in zip(gs, exps) for _ in range(e))
        if not is_normal_word(word):
            continue
        if word in seen:
            continue
        x = monomial(dom, *word)
        if len(word) <= 3 and not normal_form(x) == x:
            continue
        seen.add(word)
    return len(seen)


# ---------------------------------------------------------------------------
# Central elements


def central_coefficients(k: int, domain) -> list[tuple[int, object]]:
    """Pairs (power, coefficient) of the degree-k central polynomial."""
    if isinstance(domain, LaurentDomain):
        raise ValueError("central elements need (q - q^-1)^-1; use a cyclotomic or complex domain")
    t = domain.from_laurent(lq(1) - lq(-1))
    t_inv2 = domain.inv(t * t)
    out = []
    for j in range((k - 1) // 2 + 1):
        rat = Fraction(comb(k - j, j), k - j) * (-1) ** j
        c = domain.one() * (rat if domain.exact else float(rat))
        for _ in range(j):
            c = c * t_inv2
        out.append((k - 2 * j, c))
    return out


def central_element(r: int, l: int, k: int, domain=None, sign: int = 1) -> Element:
    """C^{(k)}(I_{rl}) = sum_j C(k-j, j)/(k-j) (-1)^j (q-q^-1)^{-2j} I_{rl}^{k-2j}."""
    domain = domain or CyclotomicDomain(k)
    x = gen(r, l, sign)
    out = Element(domain)
    for power, c in central_coefficients(k, domain):
        out = out + Element.word(domain, (x,) * power, c)
    return out


def is_central(c: Element, n: int) -> bool:
    sign = element_sign(c)
    for j in range(2, n + 1):
        g = monomial(c.domain, gen(j, j - 1))
        if not normal_form(c * g - g * c, sign).is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# Rules as consequences of the defining relations


def simple_index(g: Gen) -> int:
    if not g.simple:
        raise ValueError(f"{g} is not a simple generator")
    return g.l - 1


def defining_relations(n: int, domain) -> list[dict]:
    """The cubic and commutation relations as polynomials in letters 0..n-2.

    Letter j stands for I_{j+2,j+1}.
    """
    two = domain.from_laurent(lq(1) + lq(-1))
    one = domain.one()
    rels = []
    for i in range(n - 2):
        a, b = i, i + 1
        rels.append({(a, a, b): one, (a, b, a): -two, (b, a, a): one, (b,): one})
        rels.append({(a, b, b): one, (b, a, b): -two, (b, b, a): one, (a,): one})
    for i in range(n - 1):
        for j in range(i + 2, n - 1):
            rels.append({(i, j): one, (j, i): -one})
    return rels


_gb_cache: dict = {}


def relation_basis(n: int, degree: int):
    from .gb import GroebnerBasis

    key = (n, degree)
    if key not in _gb_cache:
        dom = RationalFunctionDomain()
        _gb_cache[key] = GroebnerBasis(dom).complete(defining_relations(n, dom), degree)
    return _gb_cache[key]


def rule_instances(n: int):
    """All descending pairs (x, y) of + letters with indices <= n."""
    gs = generators(n)
    for x in gs:
        for y in gs:
            if y.key < x.key:
                yield x, y


def expand_in_simple(x: Element, sign: int = 1, domain=None) -> dict:
    """Substitute root-element expansions for every letter; returns a gb polynomial."""
    domain = domain or RationalFunctionDomain()
    out = {}
    zero = domain.zero()
    cache = {}
    for w, c in x.terms.items():
        prod = Element.scalar(domain, domain.from_laurent(c) if isinstance(c, LaurentScalar) else c)
        for g in w:
            if g not in cache:
                cache[g] = root_element(g.k, g.l, g.sign if not g.simple else sign, domain)
            prod = prod * cache[g]
        for ww, cc in prod.terms.items():
            key = tuple(simple_index(h) for h in ww)
            out[key] = out.get(key, zero) + cc
    return {w: c for w, c in out.items() if not domain.is_zero(c)}


@dataclass
class RuleConsequenceReport:
    n: int
    checked: int
    residuals: list
    degree_bound: int

    @property
    def ok(self) -> bool:
        return not self.residuals


def verify_rule_consequences(n: int, sign: int = 1, max_degree: int | None = None) -> RuleConsequenceReport:
    """Check that each rewriting rule holds modulo the defining relations only.

    Both sides are written in the generators I_{j,j-1} via the root-element
    recursion, their difference is reduced by a degree-truncated Groebner basis
    of the defining relations over Q(q^(1/2)), and the remainder must vanish.
    """
    if not 3 <= n <= 6:
        raise ValueError("rule consequences are supported for 3 <= n <= 6")
    lau = LaurentDomain()
    pairs = []
    need = 0
    for x, y in rule_instances(n):
        xs, ys = gen(x.k, x.l, sign), gen(y.k, y.l, sign)
        lhs = monomial(lau, xs, ys)
        _, rhs = pair_rule(xs, ys, sign)
        diff = lhs - Element(lau, {w: c for c, w in rhs})
        deg = (x.k - x.l) + (y.k - y.l)
        if max_degree is not None and deg > max_degree:
            continue
        need = max(need, deg)
        pairs.append(((x, y), diff))
    basis = relation_basis(n, need)
    dom = basis.domain
    residuals = []
    for (x, y), diff in pairs:
        poly = expand_in_simple(diff, sign, dom)
        rem = basis.reduce(poly)
        if rem:
            residuals.append(((x, y), rem))
    return RuleConsequenceReport(n, len(pairs), residuals, need)
