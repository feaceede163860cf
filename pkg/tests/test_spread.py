from fractions import Fraction
from math import comb, isclose

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from spreadlab.family import (
    FamilyError,
    SetFamily,
    cell_index,
    fano_plane,
    k_subsets,
    link,
    mask_from_elements,
    star,
    symmetric_group_family,
)
from spreadlab.spread import (
    BudgetExceeded,
    RationalRoot,
    is_r_spread,
    is_rel_homogeneous,
    is_rq_spread,
    is_tau_homogeneous,
    observation_spread_bound,
    regularity_check,
    spread_radius,
)


def m(*elements):
    return mask_from_elements(e - 1 for e in elements)


def subfamilies(max_n=9, max_k=4):
    def build(nk):
        n, k = nk
        pool = oracles.ksets(n, k)
        return st.lists(st.sampled_from(pool), min_size=1, max_size=min(len(pool), 25), unique=True).map(
            lambda sets: SetFamily.from_sets(n, [sorted(s) for s in sets])
        )

    return st.integers(2, max_n).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, min(n, max_k)))).flatmap(build)


# -- RationalRoot ----------------------------------------------------------------------


def test_rational_root_ordering():
    assert RationalRoot(Fraction(6), 2) > RationalRoot(Fraction(2), 1)  # sqrt 6 > 2
    assert RationalRoot(Fraction(4), 2) == 2
    assert RationalRoot(Fraction(8), 3) == RationalRoot(Fraction(4), 2)
    assert isclose(float(RationalRoot(Fraction(7), 3)), 7 ** (1 / 3))
    doc = RationalRoot(Fraction(7, 2), 3).to_json()
    assert doc["base"] == {"num": 7, "den": 2} and doc["exponent"] == 3
    assert str(RationalRoot(Fraction(7, 2), 3)) == "(7/2)^(1/3)"
    assert str(RationalRoot(Fraction(7), 3)) == "7^(1/3)"
    assert str(RationalRoot(Fraction(7, 3), 1)) == "7/3"


# -- spread radius ---------------------------------------------------------------------


def test_radius_of_pairs_in_four():
    rep = spread_radius(k_subsets(4, 2))
    assert rep.radius == 2
    assert rep.witness == m(1)
    assert rep.per_size_min[2] == RationalRoot(Fraction(6), 2)


def test_radius_of_single_set_is_one():
    assert spread_radius(SetFamily.from_sets(3, [[1]])).radius == 1


@pytest.mark.parametrize("n,k", [(6, 2), (7, 3), (9, 4)])
def test_full_ambient_radius_is_n_over_k(n, k):
    assert spread_radius(k_subsets(n, k)).radius == Fraction(n, k)


def test_radius_boundary_is_inclusive():
    F = k_subsets(6, 3)
    assert is_r_spread(F, 2)
    assert not is_r_spread(F, Fraction(2) + Fraction(1, 10 ** 9))


def test_radius_of_fano():
    # each point lies on 3 of 7 lines, each pair on 1 line: min(7/3, sqrt 7, 7^(1/3))
    assert spread_radius(fano_plane()).radius == RationalRoot(Fraction(7), 3)


def test_radius_of_empty_family_rejected():
    with pytest.raises(FamilyError):
        spread_radius(SetFamily.from_masks(3, []))


def test_radius_size_cap():
    rep = spread_radius(fano_plane(), max_size=2)
    assert rep.radius == Fraction(7, 3)


@settings(max_examples=60, deadline=None)
@given(subfamilies())
def test_radius_matches_brute_force(F):
    ref = oracles.spread_radius([frozenset(s) for s in F.to_sets()], F.n)
    rep = spread_radius(F)
    assert isclose(rep.radius_float, ref[0], rel_tol=1e-12)
    assert rep.radius == RationalRoot(ref[1], ref[2])


@settings(max_examples=40, deadline=None)
@given(subfamilies(), st.fractions(min_value=Fraction(1, 2), max_value=5))
def test_spread_monotone(F, r):
    rep = spread_radius(F)
    if rep.is_r_spread(r):
        assert rep.is_r_spread(r / 2)


@settings(max_examples=30, deadline=None)
@given(subfamilies(max_n=8, max_k=3), st.data())
def test_link_radius_matches_brute_force(F, data):
    X = data.draw(st.sampled_from(F.members))
    X &= data.draw(st.integers(0, (1 << F.n) - 1))
    L = link(F, X)
    if not len(L) or L.members == (0,):
        return
    ref = oracles.spread_radius([frozenset(s) for s in L.to_sets()], F.n)
    assert isclose(spread_radius(L).radius_float, ref[0], rel_tol=1e-12)


# -- homogeneity ---------------------------------------------------------------------


def test_full_ambient_homogeneous():
    assert is_tau_homogeneous(k_subsets(4, 2), 1.01) == (True, None)


def test_star_not_homogeneous_at_one_and_half():
    F = star(k_subsets(4, 2), m(1))
    assert is_tau_homogeneous(F, 1.5) == (False, m(1))


def test_star_at_tau_two():
    F = star(k_subsets(4, 2), m(1))
    ref = oracles.tau_homogeneous([frozenset(s) for s in F.to_sets()], 4, 2, 2)
    assert is_tau_homogeneous(F, 2.0) == (ref, None) == (True, None)


def test_homogeneity_needs_uniform():
    with pytest.raises(FamilyError):
        is_tau_homogeneous(SetFamily.from_sets(4, [[1], [2, 3]]), 2)


def test_relative_identity():
    A = k_subsets(5, 2)
    assert is_rel_homogeneous(A, A, 1) == (True, None)


def test_relative_star_in_s3():
    S3 = symmetric_group_family(3)
    cell = 1 << cell_index(1, 1, 3)
    F = star(S3, cell)
    assert is_rel_homogeneous(F, S3, 1) == (False, cell)
    assert is_rel_homogeneous(F, S3, 3) == (True, None)


def test_relative_requires_subfamily():
    with pytest.raises(FamilyError):
        is_rel_homogeneous(SetFamily.from_sets(3, [[1, 2]]), SetFamily.from_sets(3, [[2, 3]]), 2)


@settings(max_examples=50, deadline=None)
@given(subfamilies(max_n=8), st.sampled_from([1, 1.5, 2, 3]))
def test_relative_to_full_ambient_agrees_with_absolute(F, tau):
    A = k_subsets(F.n, F.uniform_k)
    assert is_rel_homogeneous(F, A, tau)[0] == is_tau_homogeneous(F, tau)[0]
    sets = [frozenset(s) for s in F.to_sets()]
    assert is_tau_homogeneous(F, tau)[0] == oracles.tau_homogeneous(sets, F.n, F.uniform_k, tau)


@settings(max_examples=50, deadline=None)
@given(subfamilies(max_n=10), st.sampled_from([1.5, 2, 3, 4]))
def test_homogeneous_implies_radius_bound(F, tau):
    if is_tau_homogeneous(F, tau)[0]:
        assert spread_radius(F).is_r_spread(observation_spread_bound(F.n, F.uniform_k, tau))


# -- (r, q)-spreadness ---------------------------------------------------------------


@pytest.mark.parametrize("n,k", [(6, 2), (8, 3), (9, 4)])
def test_full_ambient_rq_spread(n, k):
    assert is_rq_spread(k_subsets(n, k), Fraction(n, k), k) == (True, None)


def test_rq_spread_witness():
    ok, (S, X) = is_rq_spread(k_subsets(8, 3), 3, 1)
    assert not ok and S == 0 and X == m(1)


def test_symmetric_group_rq_spread_r_one():
    assert is_rq_spread(symmetric_group_family(4), 1, 1) == (True, None)


def test_symmetric_group_eight_is_quarter_spread():
    assert is_rq_spread(symmetric_group_family(8), 2, 2) == (True, None)


@settings(max_examples=30, deadline=None)
@given(subfamilies(max_n=8, max_k=3), st.sampled_from([1, 1.5, 2, 3]), st.integers(0, 2))
def test_rq_spread_matches_link_scan(A, r, q):
    expected = True
    for S in sorted({X for M in A.members for X in range(1 << A.n) if X & M == X and bin(X).count("1") <= q}):
        sets = [frozenset(s) for s in link(A, S).to_sets()]
        ref = oracles.spread_radius(sets, A.n)
        if ref is not None and ref[1] < Fraction(r) ** ref[2]:
            expected = False
            break
    assert is_rq_spread(A, r, q)[0] == expected


# -- regularity ---------------------------------------------------------------------


def test_complete_ambient_is_regular():
    rep = regularity_check(k_subsets(6, 3), 1, 1, 0.2, 1)
    assert rep.ok and rep.complete
    assert rep.measured_epsilon == pytest.approx(1 / 6)
    assert rep.measured_theta == 1.0
    assert rep.mean_set_size == 3.0


def test_shadow_deficit_detected():
    rep = regularity_check(SetFamily.from_sets(4, [[1, 2], [3, 4]]), 1, 1, 0.01, 1)
    assert not rep.ok
    assert rep.failing_condition == "shadow_deficit"
    assert rep.failing_S == m(1) and rep.failing_l == 1


@pytest.mark.parametrize("A", [k_subsets(5, 2), SetFamily.from_sets(4, [[1, 2], [3, 4]]), fano_plane()])
def test_eps_one_is_vacuous(A):
    assert regularity_check(A, 2, 2, 1, 1).ok


def test_concentration_failure():
    # element degrees 4, 5, 3, 2, 2, 2 with mean 3: half reach 0.9 * mean
    A = SetFamily.from_sets(6, [[1, 2, 3], [1, 2, 4], [1, 2, 5], [1, 3, 6], [2, 3, 4], [2, 5, 6]])
    rep = regularity_check(A, 1, 1, Fraction(1, 10), Fraction(9, 10))
    assert not rep.ok
    assert rep.failing_condition in {"shadow_deficit", "concentration"}
    assert regularity_check(A, 1, 0, Fraction(1, 2), Fraction(9, 10)).ok
    rep2 = regularity_check(A, 1, 0, Fraction(1, 4), Fraction(9, 10))
    assert rep2.failing_condition == "concentration" and rep2.failing_S == 0 and rep2.failing_l == 1
    assert rep2.measured_theta == pytest.approx(2 / 3)


def test_regularity_budget_is_explicit():
    with pytest.raises(BudgetExceeded) as info:
        regularity_check(k_subsets(7, 3), 2, 2, 0.5, 0.5, budget=10)
    assert info.value.partial.complete is False


def test_regularity_parameter_validation():
    with pytest.raises(ValueError):
        regularity_check(k_subsets(5, 2), 1, 1, 0, 1)
    with pytest.raises(ValueError):
        regularity_check(k_subsets(5, 2), 1, 1, 0.5, 1.5)


def test_observation_bound_value():
    assert observation_spread_bound(12, 3, 2) == 2
    assert observation_spread_bound(10, 2, 1.5) == Fraction(10, 3)
    assert comb(4, 2) == 6
