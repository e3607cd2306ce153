"""Support boxes, membership screens, peaked-family mass bounds, and
finite-support certificates."""

import math
from fractions import Fraction

import pytest

from momentsupport import (
    AtomicMeasure,
    BudgetExceeded,
    DegreeExceeded,
    DimensionMismatch,
    GrowthDiverging,
    Polynomial,
    atom_mass,
    bump,
    chebyshev_tail,
    finite_support_check,
    from_atomic,
    from_closed_form,
    kl_member,
    ql_certificates,
    support_box,
)
from momentsupport.support import p_L_lower_estimate

X = Polynomial.variable(1, 0)


def canonical(degree=64):
    m = AtomicMeasure.from_pairs(
        [((Fraction(-1),), Fraction(3, 4)), ((Fraction(1, 2),), Fraction(1, 4))]
    )
    return from_atomic(m, degree)


def dirac(c, degree=64):
    m = AtomicMeasure.from_pairs([((Fraction(c),), Fraction(1))])
    return from_atomic(m, degree)


def test_p_L_lower_estimate_is_last_rung():
    L = canonical()
    assert p_L_lower_estimate(L, X) == pytest.approx(0.9955150551557358, rel=1e-12)
    with pytest.raises(DegreeExceeded):
        p_L_lower_estimate(from_closed_form("uniform01", 2), X * X)


def test_support_box_one_dim():
    box = support_box(canonical())
    assert box.num_vars == 1
    (lo, hi), = box.intervals
    assert lo == -hi
    assert 1.0 <= hi <= 1.1
    assert box.contains((Fraction(-1),))
    assert box.contains((Fraction(1, 2),))
    assert not box.contains((Fraction(2),))
    with pytest.raises(DimensionMismatch):
        box.contains((Fraction(0), Fraction(0)))


def test_support_box_two_dim():
    m = AtomicMeasure.from_pairs([((Fraction(1, 2), Fraction(-1, 3)), Fraction(1))])
    box = support_box(from_atomic(m, 32))
    assert box.num_vars == 2
    assert box.p_L_estimates[0] == pytest.approx(0.5, rel=1e-9)
    assert box.p_L_estimates[1] == pytest.approx(1 / 3, rel=1e-9)
    assert box.contains((Fraction(1, 2), Fraction(-1, 3)))
    assert not box.contains((Fraction(1), Fraction(1)))
    assert len(box.vertices()) == 4


def test_support_box_refuses_heavy_tails():
    with pytest.raises(GrowthDiverging):
        support_box(from_closed_form("gaussian", 64))


def test_kl_member_keeps_atoms_and_rejects_outliers():
    L = canonical(128)
    assert not kl_member(L, (Fraction(-1),)).rejected
    assert not kl_member(L, (Fraction(1, 2),)).rejected
    verdict = kl_member(L, (Fraction(2),))
    assert verdict.rejected
    assert verdict.witness.to_text() == "X1"
    assert verdict.tested == 2


def test_kl_member_with_vanishing_witness():
    # a polynomial that is zero on the whole support rejects every point
    # where it does not vanish
    vanishing = X * X + Fraction(1, 2) * X - Fraction(1, 2)
    verdict = kl_member(canonical(128), (Fraction(0),), tests=[vanishing])
    assert verdict.rejected
    assert verdict.witness == vanishing
    origin = kl_member(dirac(0), (Fraction(1),))
    assert origin.rejected
    assert origin.witness.to_text() == "X1"
    with pytest.raises(DimensionMismatch):
        kl_member(canonical(), (Fraction(0), Fraction(0)))


def test_bump_closed_forms():
    b = bump((Fraction(0),), X, 2)
    assert b.to_text() == "1/16*X1^4 - 1/2*X1^2 + 1"
    shifted = bump((Fraction(1, 2),), X, 2, Fraction(1, 2), n=2)
    base = (
        Polynomial.constant(1, 1)
        - Fraction(1, 8) * (Polynomial.constant(1, Fraction(1, 2)) - X) ** 2
    )
    assert shifted == base**4
    assert shifted.eval((Fraction(1, 2),)) == 1
    assert shifted.degree == 8


def test_bump_peak_dominates_nearby_values():
    b = bump((Fraction(1, 4),), X, 2)
    for k in range(-8, 9):
        assert abs(b.eval((Fraction(k, 4),))) <= 1


def test_bump_input_validation():
    with pytest.raises(BudgetExceeded):
        bump((Fraction(0),), X, 2, n=4, budget=8)
    with pytest.raises(ValueError):
        bump((Fraction(0),), X, 2, epsilon=0)
    with pytest.raises(ValueError):
        bump((Fraction(0),), X, 2, epsilon=2)
    with pytest.raises(ValueError):
        bump((Fraction(0),), X, 0)
    with pytest.raises(ValueError):
        bump((Fraction(0),), X, 2, n=0)


def test_atom_mass_single_atom_is_exact():
    estimate = atom_mass(dirac(Fraction(1, 2)), (Fraction(1, 2),), d=1, budget=4)
    assert [v for _, v in estimate.upper_bounds] == [1.0, 1.0, 1.0, 1.0]
    assert estimate.value == 1.0
    assert estimate.converged
    assert not estimate.outside_box


def test_atom_mass_recovers_two_atom_weights():
    L = canonical(128)
    heavy = atom_mass(L, (Fraction(-1),))
    light = atom_mass(L, (Fraction(1, 2),))
    assert abs(heavy.value - 0.75) <= 5e-2
    assert heavy.value >= 0.75 - 1e-9
    assert abs(light.value - 0.25) <= 5e-2
    assert light.value >= 0.25 - 1e-9
    assert heavy.converged and light.converged
    for est in (heavy, light):
        values = [v for _, v in est.upper_bounds]
        assert values == sorted(values, reverse=True)


def test_atom_mass_vanishes_off_the_support():
    L = canonical(128)
    probe = atom_mass(L, (Fraction(-1, 4),))
    assert probe.value <= 5e-2
    assert not probe.outside_box
    far = atom_mass(L, (Fraction(2),))
    assert far.outside_box
    assert far.value <= 1e-6


def test_atom_mass_stop_below_exits_early():
    probe = atom_mass(canonical(128), (Fraction(-1, 4),), stop_below=0.1)
    assert len(probe.upper_bounds) == 1
    assert probe.value < 0.1


def test_atom_mass_on_a_continuous_family():
    uni = from_closed_form("uniform01", 128)
    edge = atom_mass(uni, (Fraction(1),))
    assert edge.value < 0.3
    assert not edge.converged
    inner = atom_mass(uni, (Fraction(-1, 2),))
    assert inner.value <= 5e-2


def test_atom_mass_error_paths():
    with pytest.raises(ValueError):
        atom_mass(canonical(), (Fraction(0),), d=0)
    with pytest.raises(ValueError):
        atom_mass(canonical(), (Fraction(0),), epsilon=1.5)
    with pytest.raises(BudgetExceeded):
        atom_mass(canonical(8), (Fraction(0),), d=2)
    with pytest.raises(GrowthDiverging):
        atom_mass(from_closed_form("gaussian", 64), (Fraction(0),))


def test_finite_support_single_atom():
    report = finite_support_check(dirac(Fraction(1, 2)))
    assert report.verdict == "finite"
    assert report.atom_count == 1
    assert report.C_est == 1.0
    assert report.cardinality_bound == 1.0


def test_finite_support_two_atoms_with_candidates():
    report = finite_support_check(
        canonical(), bump_candidates=[(Fraction(-1),), (Fraction(1, 2),)]
    )
    assert report.verdict == "finite"
    assert report.atom_count == 2
    # the worst peaked ratio comes from the lighter atom: C^(2^d) = 1/4
    assert report.C_est ** 4 == pytest.approx(0.25, abs=5e-2)
    assert report.atom_count <= report.cardinality_bound + 1e-9


def test_finite_support_not_certified_for_continuous_data():
    report = finite_support_check(from_closed_form("uniform01", 64))
    assert report.verdict == "not_certified"
    assert report.atom_count is None
    # the rank climbs all the way up: no flat pair of consecutive levels
    assert report.hankel_rank == 33


def test_finite_support_refuses_heavy_tails():
    with pytest.raises(GrowthDiverging):
        finite_support_check(from_closed_form("gaussian", 64))


def test_chebyshev_tail_single_atom_closed_form():
    bounds = chebyshev_tail(dirac(1), X, 1.2)
    for m, value in bounds:
        assert value == pytest.approx((1 / 1.2) ** (2 * m), rel=1e-9)
    assert bounds[-1][1] < 1e-5


def test_chebyshev_tail_threshold_location():
    L = canonical()
    below = chebyshev_tail(L, X, 0.9)
    assert all(value == 1.0 for _, value in below)
    above = chebyshev_tail(L, X, 1.1)
    assert above[-1][1] < 1e-2
    well_above = chebyshev_tail(L, X, 1.3)
    assert well_above[-1][1] < 1e-6
    gauss = chebyshev_tail(from_closed_form("gaussian", 64), X, 10.0)
    assert 0.0 < gauss[-1][1] < 1e-12
    with pytest.raises(ValueError):
        chebyshev_tail(L, X, 0.0)


def test_ql_certificates_accept_coordinates():
    plus, minus = ql_certificates(canonical(), X)
    assert plus.is_psd and minus.is_psd
    assert plus.size == 32
    plus, minus = ql_certificates(dirac(Fraction(1, 2)), X)
    assert plus.is_psd and minus.is_psd
    plus, minus = ql_certificates(canonical(), Polynomial.constant(1, 1))
    assert plus.is_psd and minus.is_psd


def test_ql_certificates_level_override():
    plus, minus = ql_certificates(canonical(), X, t=2)
    assert plus.size == 3
    assert plus.is_psd and minus.is_psd
