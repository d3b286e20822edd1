import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uqso.reps import (DegenerateDenominator, _build_so_type, RepSpec, SpecError, build, build_cyclic, build_minimal,
                       build_nonclassical, build_partial, enumerate_basis,
                       lift_all_roots, positive_root_count, random_cyclic_spec, random_minimal_spec,
                       random_partial_spec, so2_action_exact, valid_tails)
from uqso.scalars import q_number
from uqso.verify import check_relations, intertwiner_space

h = Fraction(1, 2)


@pytest.mark.parametrize("n,N", [(3, 1), (4, 2), (5, 4), (6, 6), (7, 9)])
def test_dimension_exponent(n, N):
    assert positive_root_count(n) == N == sum(s // 2 for s in range(2, n))


@pytest.mark.parametrize("n,k", [(3, 3), (4, 3), (5, 3), (3, 5), (4, 5)])
def test_cyclic_dimension(n, k):
    rm = build_cyclic(random_cyclic_spec(n, k, seed=0))
    assert rm.dim == k ** positive_root_count(n)


@pytest.mark.parametrize("n,k", [(3, 3), (3, 5), (4, 3), (5, 3), (4, 5), (6, 3)])
def test_cyclic_relations(n, k):
    rep = check_relations(build_cyclic(random_cyclic_spec(n, k, seed=n * k)), 1e-9)
    assert rep.ok, rep.residuals


@pytest.mark.parametrize("s", [1, 2])
def test_cyclic_relations_other_root(s):
    rm = build_cyclic(random_cyclic_spec(4, 5, seed=3, s=s))
    assert check_relations(rm, 1e-9).ok


def test_principal_root_of_whole_product_fails():
    """Taking one principal root of each whole coefficient breaks the relations at n = 4."""
    import cmath
    spec = random_cyclic_spec(4, 3, seed=0)
    rm = build_cyclic(spec)
    # squared entries are sign-free, so rebuild every off-diagonal entry from its square
    bad = {g: T.copy() for g, T in rm.gens.items()}
    for g, T in bad.items():
        off = ~np.eye(T.shape[0], dtype=bool)
        T[off] = np.array([cmath.sqrt(z * z) for z in T[off]])
    rm.gens = bad
    assert not check_relations(rm, 1e-9).ok


def test_basis_order_and_wrap():
    spec = random_cyclic_spec(4, 3, seed=1)
    rm = build_cyclic(spec)
    assert rm.labels == sorted(rm.labels)
    # raising m_{1,3} k times returns to the start: the I_43 matrix has one
    # nonzero entry per shift direction and the shift is a k-cycle
    T = rm.gens[4]
    d = rm.dim
    for a in range(d):
        assert np.count_nonzero(np.abs(T[:, a]) > 1e-14) <= 2 * 2 + 1
    perm_up = {}
    for a, lab in enumerate(rm.labels):
        up = list(lab)
        up[0] = (up[0] + 1) % 3
        perm_up[a] = rm.labels.index(tuple(up))
    a0 = 0
    x = a0
    for _ in range(3):
        x = perm_up[x]
    assert x == a0


@pytest.mark.parametrize("n,k", [(4, 3), (5, 3)])
def test_band_structure(n, k):
    rm = build_cyclic(random_cyclic_spec(n, k, seed=2))
    bound = 2 * (n // 2) + 1
    for T in rm.gens.values():
        assert max(np.count_nonzero(np.abs(T[:, a]) > 1e-14) for a in range(rm.dim)) <= bound


def test_n2_builder():
    spec = RepSpec("cyclic", 2, 5, 1, [0.3 + 0.2j], {}, {})
    rm = build_cyclic(spec)
    assert rm.dim == 1
    assert abs(rm.gens[2][0, 0] - 1j * q_number(0.3 + 0.2j, (5, 1))) < 1e-14


@pytest.mark.parametrize("k", [3, 5])
def test_so2_exact_matches_builder(k):
    for m in (Fraction(1, 4), Fraction(-3, 4), Fraction(7, 4)):
        rm = build_cyclic(RepSpec("cyclic", 2, k, 1, [complex(m)], {}, {}))
        assert abs(so2_action_exact(m, k).to_complex() - rm.gens[2][0, 0]) < 1e-12


def test_so2_coincidence_outside_strip():
    # [m] = [k/2 - m]; integer differences with m + m' = k/2 mod k collide
    assert so2_action_exact(Fraction(1, 4), 3) == so2_action_exact(Fraction(5, 4), 3)
    assert so2_action_exact(Fraction(-1, 4), 3) != so2_action_exact(Fraction(3, 4), 3)


def test_json_round_trip():
    spec = random_cyclic_spec(5, 3, seed=4)
    back = RepSpec.loads(spec.dumps())
    assert back.to_json() == spec.to_json()
    assert json.loads(spec.dumps())["class"] == "cyclic"
    ps = random_partial_spec(5, 3, 1, [0], seed=1)
    assert RepSpec.loads(ps.dumps()).to_json() == ps.to_json()


def test_validation_lists_every_problem():
    spec = RepSpec("cyclic", 4, 3, 1, [0.5, 0.1 + 0.1j], {(1, 2): 0}, {(1, 2): 0.1 + 0.1j})
    with pytest.raises(SpecError) as e:
        spec.validate()
    text = "\n".join(e.value.problems)
    assert "c: missing entries 1,3" in text
    assert "h: missing entries 1,3" in text
    assert "c[1,2]: must be nonzero" in text
    assert "m[1,4]" in text


def test_loads_reports_bad_json():
    with pytest.raises(SpecError) as e:
        RepSpec.loads('{"class": "cyclic", "n": 3,')
    assert "json" in e.value.problems[0]
    with pytest.raises(SpecError):
        RepSpec.loads('{"class": "cyclic"}')


def test_genericity_margin():
    base = random_cyclic_spec(3, 3, seed=0)
    base.h[(1, 2)] = 0.5 + 1e-8j
    assert any("genericity" in p for p in base.problems())
    base.h[(1, 2)] = 0.5 + 1e-5j
    assert not any(p.startswith("genericity: h[1,2] ") for p in base.problems())


@given(st.integers(0, 10_000), st.sampled_from([(3, 3), (4, 3), (3, 5)]))
@settings(max_examples=15, deadline=None)
def test_random_cyclic_specs_satisfy_relations(seed, nk):
    n, k = nk
    assert check_relations(build_cyclic(random_cyclic_spec(n, k, seed=seed)), 1e-9).ok


# -- minimal -----------------------------------------------------------------


@pytest.mark.parametrize("n,k", [(3, 3), (4, 3), (5, 3), (6, 3), (4, 5)])
def test_minimal(n, k):
    spec = random_minimal_spec(n, k, seed=1)
    rm = build_minimal(spec)
    # one free cyclic label per row m_{n-1}, ..., m_2
    assert rm.dim == k ** (n - 2)
    assert spec.parameter_count() == 2 * n - 3
    assert check_relations(rm, 1e-9).ok


def test_minimal_is_gauge_equivalent_to_cyclic_for_n3():
    mspec = random_minimal_spec(3, 3, seed=5)
    m = mspec.m_n[0]
    # matching labels: l_12 = m_2 - 1/2 and l_13 = m_3 + 1/2, c unchanged;
    # the two coefficient formulas then differ by a diagonal rescaling
    cspec = RepSpec("cyclic", 3, 3, 1, [m - 0.5], {(1, 2): mspec.c[(1, 2)]},
                    {(1, 2): mspec.h[(1, 2)] - 0.5})
    space = intertwiner_space(build_minimal(mspec), build_cyclic(cspec))
    assert len(space) == 1
    assert abs(np.linalg.det(space[0])) > 1e-6


# -- partial and nonclassical -----------------------------------------------


def test_valid_tails():
    assert valid_tails(5, 3, 1) == [(Fraction(0),)]
    assert valid_tails(5, 3, 1, "nonclassical") == []
    assert valid_tails(4, 3, 1, "nonclassical") == [(h,)]


@pytest.mark.parametrize("n,k,tail,dim", [
    (5, 3, [0], 27),
    (5, 5, [1], 375),
    (5, 5, [h], 250),
    (6, 3, [0, 0], 81),
])
def test_partial(n, k, tail, dim):
    rm = build_partial(random_partial_spec(n, k, 1, tail, seed=2))
    assert rm.dim == dim
    assert check_relations(rm, 1e-9).ok


def test_partial_tail_rules():
    with pytest.raises(SpecError):
        random_partial_spec(5, 3, 1, [1])  # l + l = 3 is not < k
    with pytest.raises(SpecError):
        random_partial_spec(6, 5, 1, [0, 1])  # not non-increasing
    with pytest.raises(SpecError):
        random_partial_spec(6, 5, 1, [1, h])  # mixed integer / half-integer


def test_partial_classical_rows_follow_betweenness():
    # n = 6, tail (1, -1): m_25 is squeezed to 1, then m_24 runs over -1, 0, 1
    rm = build_partial(random_partial_spec(6, 5, 1, [1, -1], seed=0))
    assert rm.dim == 5 ** 4 * 3
    seen = set()
    for t in rm.tableaux:
        assert t.row(5, 6)[1] == 1
        seen.add(t.row(4, 6)[1])
    assert seen == {-1, 0, 1}


@pytest.mark.xfail(strict=True, reason="verbatim nonclassical operators violate the relations")
def test_nonclassical_relations_verbatim():
    spec = random_partial_spec(4, 3, 1, [h], seed=2, cls="nonclassical", epsilon={4: 1})
    assert check_relations(build_nonclassical(spec), 1e-9).ok


def test_nonclassical_builds_with_expected_dimension():
    spec = random_partial_spec(4, 3, 1, [h], seed=2, cls="nonclassical", epsilon={4: -1})
    rm = build_nonclassical(spec)
    assert rm.dim == 9  # rows 3 and 2 are cyclic, the tail 1/2 is fixed
    assert rm.tableaux[0].row(4, 4)[1] == h


def test_lift_all_roots_matches_recursion():
    rm = lift_all_roots(build_cyclic(random_cyclic_spec(4, 3, seed=1)))
    v = rm.v()
    T = rm.gens
    assert np.allclose(rm.root(3, 1), v * T[2] @ T[3] - T[3] @ T[2] / v)
    assert np.allclose(rm.root(3, 1, -1), T[2] @ T[3] / v - v * T[3] @ T[2])
    assert np.allclose(rm.root(4, 1), v * T[2] @ rm.root(4, 2) - rm.root(4, 2) @ T[2] / v)


def test_enumerate_basis_rows():
    spec = random_cyclic_spec(4, 3, seed=0)
    basis = enumerate_basis(spec)
    assert len(basis) == 9
    assert basis[0].row(4, 4) == tuple(spec.m_n)
    assert abs(basis[0].row(3, 4)[0] - spec.h[(1, 3)]) < 1e-15


def test_degenerate_denominator_raised():
    # an l-coordinate on q^l + q^-l = 0 (l = 3/4 at k = 3) makes the I_32 denominator vanish
    spec = random_cyclic_spec(3, 3, seed=0)
    spec.h[(1, 2)] = 0.75 + 0.2j
    spec.validate()
    spec.h[(1, 2)] = 0.75
    with pytest.raises(DegenerateDenominator):
        _build_so_type(spec)  # skip validation, which already excludes this point
