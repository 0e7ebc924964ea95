import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from rough_angles import (
    FiniteMetricSpace,
    all_pair_colorings_force_triangle,
    as_dse,
    c_of_m_theta,
    default_theta,
    extract_sra_subspace,
    find_theta_straight_subset,
    format_constant,
    gen_snowflaked_path,
    globq_bound,
    is_sra,
    make_bundle,
    max_theta_straight_subset,
    n_of_theta_alpha,
    ramsey_pair_bound,
    ramsey_triple_bound,
    refute_weird_angles,
    subspace,
    weird_angle_limit,
    weird_angle_threshold,
    weird_conditions_satisfied,
)

from _generators import collinear


# ---------------------------------------------------------------------------
# Closed-form constants
# ---------------------------------------------------------------------------

def test_c_of_m_theta_exact_values():
    assert c_of_m_theta(3, 0.5) == 78
    assert c_of_m_theta(4, 0.5) == 6920
    assert c_of_m_theta(3, 1) == 42  # boundary value, unit-test only


def test_c_of_m_theta_monotone():
    thetas = [Fraction(i, 10) for i in range(1, 10)]
    for m in (3, 4, 5):
        vals = [c_of_m_theta(m, t) for t in thetas]
        assert all(a > b for a, b in zip(vals, vals[1:]))  # decreasing in theta
    for t in thetas:
        vals = [c_of_m_theta(m, t) for m in range(3, 8)]
        assert all(a < b for a, b in zip(vals, vals[1:]))  # increasing in m


def test_c_of_m_theta_beyond_double_precision():
    v = c_of_m_theta(12, Fraction(1, 2))
    assert v == Fraction((12 * 11) ** 11, 1) / Fraction(1, 2) ** 10 + 24
    assert v.numerator > 2**63
    assert format_constant(v)  # renders without overflow


def test_format_constant():
    assert format_constant(Fraction(78)) == "78"
    assert format_constant(Fraction(1, 4)) == "0.25"
    assert "/" in format_constant(Fraction(1, 3))


def test_n_of_theta_alpha_examples():
    assert n_of_theta_alpha(0.2, 0.9) == 3
    assert n_of_theta_alpha(0.3, 0.95) == 5
    with pytest.raises(ValueError, match="limit"):
        n_of_theta_alpha(0.2, 0.74)  # limit is exactly 0.75
    # threshold(2) = 1/(2q) = 1/(1-theta)
    for theta in (0.1, 0.2, 0.4):
        assert weird_angle_threshold(theta, 2) == 1 / (1 - Fraction(str(theta)))


def test_n_of_theta_alpha_corrected_is_one_more():
    for theta, alpha in [(0.2, 0.9), (0.3, 0.95), (0.1, 0.8), (0.25, 0.97)]:
        base = n_of_theta_alpha(theta, alpha)
        corr = n_of_theta_alpha(theta, alpha, corrected=True)
        assert corr == base + 1


def test_n_of_theta_alpha_monotone_in_alpha():
    prev = None
    for alpha in np.linspace(0.76, 0.99, 12):
        n = n_of_theta_alpha(0.2, float(alpha))
        if prev is not None:
            assert n <= prev
        prev = n


def test_threshold_converges_to_limit_from_above():
    theta = Fraction(1, 4)
    limit = weird_angle_limit(theta)
    vals = [weird_angle_threshold(theta, n) for n in range(2, 40)]
    assert all(v > limit for v in vals)
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] - limit < Fraction(1, 10**4)


# ---------------------------------------------------------------------------
# Ramsey bounds
# ---------------------------------------------------------------------------

def test_ramsey_pair_bound_values():
    assert ramsey_pair_bound(1, 7) == 7
    assert ramsey_pair_bound(2, 3) == 6
    assert ramsey_pair_bound(3, 3) == 17
    assert ramsey_pair_bound(2, 4) == 20  # Pascal: C(6,3)
    assert ramsey_pair_bound(2, 2) == 2


def test_ramsey_pair_bound_errors():
    with pytest.raises(ValueError):
        ramsey_pair_bound(0, 3)
    with pytest.raises(ValueError):
        ramsey_pair_bound(2, 1)


def test_ramsey_triple_bound_values():
    assert ramsey_triple_bound(4, 3) == 4
    assert ramsey_triple_bound(3, 9) == 9
    assert ramsey_triple_bound(4, 4) == 21
    assert ramsey_triple_bound(4, 4) >= 13  # true value is 13
    with pytest.raises(ValueError):
        ramsey_triple_bound(2, 4)


def test_triangle_ramsey_exhaustive():
    # R(3,3) = 6: some 2-coloring of K5 avoids mono triangles (the pentagon),
    # no 2-coloring of K6 does.  2^10 and 2^15 colorings checked exhaustively.
    assert not all_pair_colorings_force_triangle(5)
    assert all_pair_colorings_force_triangle(6)
    assert ramsey_pair_bound(2, 3) == 6  # the recurrence bound is tight here


def test_globq_bound():
    assert globq_bound(5, 2, 4.0, 1.0) == 20
    assert globq_bound(1, 3, 8.0, 1.0) == 27
    assert globq_bound(7, 2, 1.0, 1.0) == 7  # exponent 0 at R = r
    assert globq_bound(4, 2, 3.0, 1.0) == 16  # ceil(log2 3) = 2
    with pytest.raises(ValueError):
        globq_bound(5, 2, 1.0, 4.0)


# ---------------------------------------------------------------------------
# Theta-straight subsets
# ---------------------------------------------------------------------------

def test_theta_straight_snowflaked_triple():
    d = gen_snowflaked_path(10, 0.5)
    got = find_theta_straight_subset(d, 3, 0.5)
    assert got is not None
    i, j, k = got
    dist = d.dist
    assert dist[i, k] <= dist[i, j] + 0.5 * dist[j, k]
    assert got == (0, 1, 2)  # sqrt(2) <= 1 + 0.5


def test_theta_straight_collinear_absent():
    d = as_dse(collinear(5))
    assert find_theta_straight_subset(d, 3, 0.5) is None
    # independent oracle: all 10 in-order triples fail directly
    dist = d.dist
    for i, j, k in combinations(range(5), 3):
        assert dist[i, k] > dist[i, j] + 0.5 * dist[j, k]


def test_theta_straight_m2_trivial():
    d = as_dse(collinear(4))
    assert find_theta_straight_subset(d, 2, 0.5) == (0, 1)


def test_theta_straight_four_point_witness():
    # positions {0,2,3,4} of the snowflaked path: gaps 2,1,1 keep every
    # in-order split ratio within the theta=0.5 bound u <= 16/9
    d = gen_snowflaked_path(10, 0.5)
    got = find_theta_straight_subset(d, 4, 0.5)
    assert got is not None
    dist = d.dist
    for a, b, c in combinations(got, 3):
        assert dist[a, c] <= dist[a, b] + 0.5 * dist[b, c] + 1e-15


def test_max_theta_straight_subset():
    d = gen_snowflaked_path(12, 0.1)
    theta = default_theta(0.8)
    best = max_theta_straight_subset(d, theta)
    assert len(best) >= 4
    dist = d.dist
    for a, b, c in combinations(best, 3):
        assert dist[a, c] <= dist[a, b] + theta * dist[b, c] + 1e-15
    coll = as_dse(collinear(6))
    assert len(max_theta_straight_subset(coll, 0.4)) == 2


# ---------------------------------------------------------------------------
# Refutation search
# ---------------------------------------------------------------------------

def test_weird_conditions_checker_on_known_instance():
    # Hand-checkable feasible instance at size 3 for (theta, alpha) = (0.2, 0.9):
    # d12 = d13 = 1, d23 = 1.95.  Middle point almost on the segment.
    d = np.array([[0.0, 1.0, 1.0], [1.0, 0.0, 1.95], [1.0, 1.95, 0.0]])
    assert weird_conditions_satisfied(d, 0.2, 0.9)
    # and the expansion condition is sharp: d23 below 1.9 fails
    d_bad = d.copy(); d_bad[1, 2] = d_bad[2, 1] = 1.85
    assert not weird_conditions_satisfied(d_bad, 0.2, 0.9)


def test_refutation_at_corrected_size_finds_nothing():
    """At the size where the telescoping argument actually applies, the
    search over grid probes plus seeded random trials must find nothing."""
    for theta, alpha in [(0.2, 0.9), (0.3, 0.95)]:
        n = n_of_theta_alpha(theta, alpha, corrected=True)
        rep = refute_weird_angles(theta, alpha, n, trials=30_000, seed=101)
        assert rep.feasible_count == 0
        assert rep.first_feasible is None
        assert rep.min_total_violation > 0.0


def test_feasible_instances_exist_one_below_corrected_size():
    """One size below, feasible instances exist and the search finds them;
    the closed-form size formula names exactly this size, so its claimed
    nonexistence fails there (the geometric sum behind it carries one term
    too many).  Every reported hit re-verifies against the exact checker."""
    rep = refute_weird_angles(0.2, 0.9, 3, trials=5_000, seed=7)
    assert rep.n_required == 3
    assert rep.n_required_corrected == 4
    assert rep.feasible_count > 0
    assert weird_conditions_satisfied(np.array(rep.first_feasible), 0.2, 0.9)


def test_refutation_n2_out_of_range():
    rep = refute_weird_angles(0.2, 0.9, 2, trials=10, seed=0)
    assert not rep.in_lemma_range
    assert rep.feasible_count == 1  # both conditions vacuous on two points


def test_refutation_requires_alpha_above_limit():
    with pytest.raises(ValueError):
        refute_weird_angles(0.2, 0.7, 4, trials=10, seed=0)


def test_refutation_deterministic():
    a = refute_weird_angles(0.2, 0.9, 4, trials=8_000, seed=5)
    b = refute_weird_angles(0.2, 0.9, 4, trials=8_000, seed=5)
    assert a == b


# ---------------------------------------------------------------------------
# Extraction pipeline
# ---------------------------------------------------------------------------

def test_default_theta():
    th = default_theta(0.8)
    assert 0.0 < th < 0.5
    assert float(weird_angle_limit(th)) < 0.8
    with pytest.raises(ValueError):
        default_theta(0.5)


def test_bundle_contents():
    b = make_bundle(0.8, k=4)
    assert b.n_theta_alpha == n_of_theta_alpha(b.theta, 0.8)
    assert b.m == ramsey_triple_bound(4, max(b.n_theta_alpha, 3))
    assert b.c_m_theta == c_of_m_theta(max(b.m, 3), b.theta)
    d = b.as_dict()
    assert d["ramsey_bound_tight"] is False


def test_extract_trivial_pair():
    d = gen_snowflaked_path(5, 0.5)
    res = extract_sra_subspace(d, 0.8, 2)
    assert res.branch == "trivial-pair"
    assert res.certificate.subset == (0, 1)


def test_extract_direct_route_on_snowflaked_path():
    d = gen_snowflaked_path(30, 0.6)
    res = extract_sra_subspace(d, 0.8, 4)
    assert res.certificate is not None
    assert len(res.certificate.subset) == 4
    sub = subspace(d.space, res.certificate.subset)
    assert is_sra(sub, 0.8, tol=1e-12).is_sra
    assert res.branch in ("straight-red", "direct-search")


def test_extract_proof_route_fires_on_rapidly_flattening_path():
    # beta = 0.1 keeps long runs theta-straight at theta ~ 0.115, so the
    # two-coloring route itself produces the certificate.
    d = gen_snowflaked_path(12, 0.1)
    res = extract_sra_subspace(d, 0.8, 4)
    assert res.branch == "straight-red"
    assert len(res.straight_subset) >= 4
    sub = subspace(d.space, res.certificate.subset)
    assert is_sra(sub, 0.8, tol=1e-12).is_sra


def test_extract_collinear_below_threshold():
    d = as_dse(collinear(10))
    res = extract_sra_subspace(d, 0.8, 3)
    assert res.certificate is None
    assert res.branch == "below-threshold"
    assert "not attained" in res.notes


def test_extract_blue_breach_diagnostic():
    # The known feasible 3-point instance is entirely theta-straight and its
    # single triple is blue at alpha = 0.9, so the pipeline must surface the
    # breach instead of fabricating a certificate.
    d = as_dse(FiniteMetricSpace(
        [[0.0, 1.0, 1.0], [1.0, 0.0, 1.95], [1.0, 1.95, 0.0]]))
    res = extract_sra_subspace(d, 0.9, 3)
    assert res.certificate is None
    assert res.branch == "blue-breach"
    assert res.blue_subset == (0, 1, 2)


def test_extract_alpha_range():
    d = gen_snowflaked_path(5, 0.5)
    with pytest.raises(ValueError):
        extract_sra_subspace(d, 0.4, 3)
