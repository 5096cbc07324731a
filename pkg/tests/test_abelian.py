"""Cycle integrals, zero counting, bounds and the end-to-end report."""

import random

import pytest

from abelint import (
    BiPoly,
    GaussRat,
    IdenticallyZero,
    OneForm,
    UniPoly,
    build_rectifier,
    canonical_cycles,
    count_zeros,
    degree_row_bound,
    full_report,
    integrate_cycle,
    reduce_to_nonexact_basis,
    validate,
    zero_count_cap,
)
from test_family import cubic_form, oscillator_form, septic_f1, septic_f2

from conftest import random_normal_form, random_oneform


def form_dx(*terms):
    return OneForm(BiPoly({(i, j): GaussRat(v) for i, j, v in terms}), BiPoly())


SEPTIC_F2_FORM = form_dx((0, 3, 1), (1, 2, -108), (0, 1, -66))
SEPTIC_F1_FORM = form_dx((0, 3, 1), (2, 1, -96), (0, 1, 1008))


class TestGoldenIntegrals:
    def test_septic_f2_first_cycle(self):
        report = full_report(septic_f2(), SEPTIC_F2_FORM)
        # 3(c + 1)(4c^6 + 3c^5 - 36c - 58)
        expected = UniPoly([1, 1]).scale(GaussRat(3)) * \
            UniPoly([-58, -36, 0, 0, 0, 3, 4])
        assert report.integrals[0].value == expected

    def test_septic_f2_second_cycle(self):
        report = full_report(septic_f2(), SEPTIC_F2_FORM)
        # -3(c - 1)(c + 2)(4c^5 + 3c^4 + 8c^3 - 2c^2 + 18c - 58)
        expected = UniPoly([-1, 1]) * UniPoly([2, 1]) * \
            UniPoly([-58, 18, -2, 8, 3, 4]).scale(GaussRat(-3))
        assert report.integrals[1].value == expected

    def test_septic_f2_counts(self):
        report = full_report(septic_f2(), SEPTIC_F2_FORM)
        assert report.zero_counts == (6, 7)
        assert report.n_bc == 13
        assert report.nonconservative

    def test_septic_f1_moving_cycle(self):
        report = full_report(septic_f1(), SEPTIC_F1_FORM)
        # 96(2c + 5)(c - 4)
        expected = (UniPoly([5, 2]) * UniPoly([-4, 1])).scale(GaussRat(96))
        assert report.integrals[2].value == expected

    def test_septic_f1_counts(self):
        report = full_report(septic_f1(), SEPTIC_F1_FORM)
        assert report.zero_counts == (6, 7, 2)
        assert report.n_bc == 15

    def test_oscillator_extremal(self):
        # A(H) y dx with A = (H - 1)(H - 2) integrates to -c(c - 1)(c - 2)
        w = form_dx((0, 3, 1), (1, 3, -2), (2, 3, 1), (0, 2, -3),
                    (1, 2, 3), (0, 1, 2))
        report = full_report(oscillator_form(), w)
        expected = UniPoly([0, 1]) * UniPoly([-1, 1]) * UniPoly([-2, 1])
        assert report.integrals[0].value == expected.scale(GaussRat(-1))
        assert report.zero_counts == (2,)


class TestZeroCounting:
    def test_multiplicity_subtraction(self):
        nf = oscillator_form()
        rm = build_rectifier(nf)
        coeffs, _ = reduce_to_nonexact_basis(form_dx((0, 1, 1)))
        ai = integrate_cycle(rm, coeffs, canonical_cycles(validate(nf))[0])
        # value is -c: one zero, at the bifurcation value 0
        assert count_zeros(ai, [GaussRat(0)]) == 0
        assert count_zeros(ai, []) == 1

    def test_identically_zero_raises(self):
        nf = oscillator_form()
        rm = build_rectifier(nf)
        ai = integrate_cycle(rm, {}, canonical_cycles(validate(nf))[0])
        assert ai.identically_zero
        with pytest.raises(IdenticallyZero):
            count_zeros(ai, [])

    def test_conservative_form_disables_total_count(self):
        report = full_report(oscillator_form(), form_dx((2, 0, 1)))
        assert not report.nonconservative
        assert report.n_bc is None

    def test_bifurcation_override_extends_candidates(self):
        # (H - 3) y dx integrates to -c(c - 3): one zero off the candidate set
        w = form_dx((0, 2, 1), (1, 2, -1), (0, 1, -3))
        base = full_report(oscillator_form(), w)
        assert base.integrals[0].value == \
            (UniPoly([0, 1]) * UniPoly([-3, 1])).scale(GaussRat(-1))
        assert base.zero_counts == (1,)
        overridden = full_report(oscillator_form(), w,
                                 bifurcation_override=[GaussRat(3)])
        assert overridden.zero_counts == (0,)
        assert GaussRat(3) in overridden.bifurcation_set_used


class TestBounds:
    def test_zero_count_cap_small_degrees(self):
        assert zero_count_cap(1, 5, 1) == 3
        assert zero_count_cap(2, 5, 1) == 5
        assert zero_count_cap(6, 3, 2) == 19

    def test_zero_count_cap_large_degree(self):
        m, n, rank = 12, 3, 2
        expected = ((n + 1) * ((m - rank) // rank) - 1) * (m - rank - 2) - rank + 1
        assert zero_count_cap(m, n, rank) == expected

    def test_degree_rows_match_observed_goldens(self):
        facts = validate(septic_f2())
        cycles = canonical_cycles(facts)
        assert degree_row_bound(facts, septic_f2(), 3, cycles[0]) == 7
        facts1 = validate(septic_f1())
        cycles1 = canonical_cycles(facts1)
        assert degree_row_bound(facts1, septic_f1(), 3, cycles1[2]) == 2

    def test_all_bounds_satisfied_on_goldens(self):
        for nf, w in ((septic_f2(), SEPTIC_F2_FORM),
                      (septic_f1(), SEPTIC_F1_FORM)):
            report = full_report(nf, w)
            assert report.ledger.all_satisfied
            assert not report.ledger.violations()

    def test_vanishing_cycle_entry_present_with_mu(self):
        report = full_report(septic_f2(), SEPTIC_F2_FORM, mu=2)
        names = [e.name for e in report.ledger.entries]
        assert "total_count_cap_with_vanishing_cycles" in names

    def test_random_reports_satisfy_bounds(self):
        rng = random.Random(83)
        for _ in range(20):
            nf = random_normal_form(rng)
            w = random_oneform(rng, 4)
            report = full_report(nf, w)
            assert report.ledger.all_satisfied, (nf, w)
