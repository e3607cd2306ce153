"""Moment sequences, structured matrices, and the JSON file format."""

from fractions import Fraction

import pytest

from momentsupport import (
    AtomicMeasure,
    DegreeExceeded,
    DimensionMismatch,
    MomentFileError,
    MomentSequence,
    Polynomial,
    apply,
    cbs_check,
    dirac_series_measure,
    from_atomic,
    from_closed_form,
    localizing_matrix,
    moment_matrix,
    psd_check,
)
from momentsupport import moments as mm


def canonical_measure():
    return AtomicMeasure.from_pairs(
        [((Fraction(-1),), Fraction(3, 4)), ((Fraction(1, 2),), Fraction(1, 4))]
    )


def test_atomic_measure_validation():
    with pytest.raises(ValueError):
        AtomicMeasure.from_pairs([])
    with pytest.raises(ValueError):
        AtomicMeasure.from_pairs([((0,), Fraction(1)), ((0,), Fraction(1))], False)
    with pytest.raises(ValueError):
        AtomicMeasure.from_pairs([((0,), Fraction(-1, 2))], False)
    with pytest.raises(DimensionMismatch):
        AtomicMeasure(2, (((Fraction(0),), Fraction(1)),))
    with pytest.raises(ValueError):
        AtomicMeasure.from_pairs([((0,), Fraction(1, 3))])
    ok = AtomicMeasure.from_pairs([((0,), Fraction(1, 3))], require_normalized=False)
    assert ok.total_mass() == Fraction(1, 3)


def test_sequence_requires_all_moments_and_unit_mass():
    values = {(0,): Fraction(1), (2,): Fraction(1)}
    with pytest.raises(MomentFileError):
        MomentSequence(1, 2, values)
    values = {(0,): Fraction(2), (1,): Fraction(0), (2,): Fraction(1)}
    with pytest.raises(MomentFileError):
        MomentSequence(1, 2, values)
    values = {(0,): Fraction(1), (1,): Fraction(0), (2,): Fraction(1), (3,): Fraction(0)}
    with pytest.raises(MomentFileError):
        MomentSequence(1, 2, values)


def test_value_respects_degree_budget():
    L = from_atomic(canonical_measure(), 8)
    assert L.value((3,)) == Fraction(-3, 4) + Fraction(1, 32)
    with pytest.raises(DegreeExceeded):
        L.value((9,))


def test_canonical_two_atom_moments():
    L = from_atomic(canonical_measure(), 64)
    assert L.value((0,)) == 1
    assert L.value((1,)) == Fraction(-5, 8)
    assert L.value((2,)) == Fraction(13, 16)
    assert moment_matrix(L, 1) == [
        [Fraction(1), Fraction(-5, 8)],
        [Fraction(-5, 8), Fraction(13, 16)],
    ]


def test_closed_form_families():
    uni = from_closed_form("uniform01", 64)
    assert uni.value((7,)) == Fraction(1, 8)
    gauss = from_closed_form("gaussian", 16)
    assert gauss.value((8,)) == 105
    assert gauss.value((9,)) == 0
    with pytest.raises(MomentFileError):
        from_closed_form("cauchy", 8)


def test_dirac_series_weights_sum_to_one():
    m = dirac_series_measure(3)
    assert m.total_mass() == 1
    assert m.weights() == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]
    L = from_atomic(m, 8)
    # 1/2 * 1 + 1/4 * 1/2 + 1/4 * 1/3
    assert L.value((1,)) == Fraction(17, 24)


def test_apply_checks_dimension_and_degree():
    L = from_atomic(canonical_measure(), 8)
    x = Polynomial.variable(1, 0)
    assert apply(L, x * x + x) == Fraction(3, 16)
    with pytest.raises(DimensionMismatch):
        apply(L, Polynomial.variable(2, 0))
    with pytest.raises(DegreeExceeded):
        apply(L, x**9)


def test_localizing_matrix_entries():
    L = from_atomic(canonical_measure(), 8)
    x = Polynomial.variable(1, 0)
    assert localizing_matrix(L, x, 1) == [
        [Fraction(-5, 8), Fraction(13, 16)],
        [Fraction(13, 16), Fraction(-23, 32)],
    ]
    with pytest.raises(DegreeExceeded):
        localizing_matrix(L, x, 4)


def test_psd_check_verdicts():
    L = from_atomic(canonical_measure(), 8)
    report = psd_check(moment_matrix(L, 1))
    assert report.verdict == "psd"
    assert report.is_psd
    assert report.rank_estimate == 2

    # two atoms cannot fill a 3x3 moment matrix: rank stays flat at 2
    wide = psd_check(moment_matrix(L, 2))
    assert wide.verdict == "borderline"
    assert wide.rank_estimate == 2

    dirac = AtomicMeasure.from_pairs([((Fraction(1, 2),), Fraction(1))])
    flat = psd_check(moment_matrix(from_atomic(dirac, 8), 2))
    assert flat.verdict == "borderline"
    assert flat.is_psd
    assert flat.rank_estimate == 1

    bad = psd_check([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(1)]])
    assert bad.verdict == "not_psd"
    assert not bad.is_psd
    assert bad.min_eigenvalue == pytest.approx(-1.0)


def test_psd_check_rejects_bad_shapes():
    with pytest.raises(DimensionMismatch):
        psd_check([[1, 2]])
    with pytest.raises(ValueError):
        psd_check([[1, 2], [3, 1]])


def test_cbs_inequality_is_exact():
    uni = from_closed_form("uniform01", 8)
    x = Polynomial.variable(1, 0)
    assert cbs_check(uni, x, Polynomial.constant(1, 1))
    # a single atom turns the inequality into an equality, which still passes
    dirac = AtomicMeasure.from_pairs([((Fraction(1, 3),), Fraction(1))])
    L = from_atomic(dirac, 8)
    assert cbs_check(L, x + 1, 2 * x - 1)
    with pytest.raises(DegreeExceeded):
        cbs_check(uni, x**5, x**5)


def test_json_round_trip_preserves_everything():
    L = from_atomic(canonical_measure(), 6, provenance="fixture")
    back = mm.loads(mm.dumps(L))
    assert back.num_vars == L.num_vars
    assert back.max_degree == L.max_degree
    assert back.values == L.values
    assert back.provenance == "fixture"


def test_file_decimals_are_read_in_base_ten():
    text = (
        '{"num_vars": 1, "max_degree": 2, "provenance": "t", "moments": ['
        '{"exp": [0], "value": 1}, '
        '{"exp": [1], "value": 0.1}, '
        '{"exp": [2], "value": "3/7"}]}'
    )
    L = mm.loads(text)
    assert L.value((1,)) == Fraction(1, 10)
    assert L.value((2,)) == Fraction(3, 7)


def test_file_rejects_binary_floats_and_conflicts():
    data = {
        "num_vars": 1,
        "max_degree": 1,
        "moments": [
            {"exp": [0], "value": 1},
            {"exp": [1], "value": 0.1},
        ],
    }
    with pytest.raises(MomentFileError, match="use a string"):
        mm.from_json_dict(data)
    data["moments"][1] = {"exp": [1], "value": "1/2"}
    data["moments"].append({"exp": [1], "value": "1/3"})
    with pytest.raises(MomentFileError, match="conflicting"):
        mm.from_json_dict(data)


def test_file_rejects_malformed_documents():
    with pytest.raises(MomentFileError):
        mm.loads("not json")
    with pytest.raises(MomentFileError):
        mm.loads("[1, 2]")
    with pytest.raises(MomentFileError):
        mm.loads('{"num_vars": 1, "moments": []}')
