"""Automorphisms, push-forwards and the non-exact basis reduction."""

import random

import pytest

from abelint import (
    BiPoly,
    GaussRat,
    OneForm,
    PolyAutomorphism,
    basis_combination,
    pushforward_oneform,
    pushforward_polynomial,
    reduce_to_nonexact_basis,
)
from abelint.transform import AutomorphismError

from conftest import random_bipoly, random_oneform


def shear_automorphism():
    """(u, v) -> (u, v + u^2), a polynomial shear."""
    x, y = BiPoly.var(0), BiPoly.var(1)
    return PolyAutomorphism((x, y + x * x), (x, y - x * x))


def oscillator_automorphism():
    """(u, v) -> (1 - u - iv, (u - iv)/2) carrying (u^2 + v^2)/2 to y(1 - x)."""
    x, y = BiPoly.var(0), BiPoly.var(1)
    i = GaussRat(0, 1)
    one = BiPoly.const(GaussRat(1))
    half = GaussRat(1) / GaussRat(2)
    forward = (one - x - y.scale(i), (x - y.scale(i)).scale(half))
    # Solve u + iv = 1 - x and u - iv = 2y:
    # u = (1 - x + 2y)/2, v = (1 - x - 2y)/(2i) = -i(1 - x - 2y)/2
    u = (one - x + y + y).scale(half)
    v = (one - x - y - y).scale(-i * half)
    return PolyAutomorphism(forward, (u, v))


class TestAutomorphism:
    def test_identity(self):
        aut = PolyAutomorphism.identity()
        poly = BiPoly({(2, 1): GaussRat(3)})
        assert pushforward_polynomial(poly, aut) == poly

    def test_bad_inverse_rejected(self):
        x, y = BiPoly.var(0), BiPoly.var(1)
        with pytest.raises(AutomorphismError):
            PolyAutomorphism((x, y + x * x), (x, y + x * x))

    def test_sigma_must_be_invertible(self):
        x, y = BiPoly.var(0), BiPoly.var(1)
        with pytest.raises(AutomorphismError):
            PolyAutomorphism((x, y), (x, y), GaussRat(0), GaussRat(1))

    def test_oscillator_pair_rectifies_hamiltonian(self):
        # (u^2 + v^2)/2 becomes y(1 - x) in the new coordinates
        aut = oscillator_automorphism()
        half = GaussRat(1) / GaussRat(2)
        h = BiPoly({(2, 0): half, (0, 2): half})
        x, y = BiPoly.var(0), BiPoly.var(1)
        assert pushforward_polynomial(h, aut) == \
            y * (BiPoly.const(GaussRat(1)) - x)

    def test_shear_carries_broughton_hamiltonian(self):
        # u(uv - 1) under (u, v) -> (1 - u, v) becomes y(1 - x)^2 + (x - 1)
        x, y = BiPoly.var(0), BiPoly.var(1)
        one = BiPoly.const(GaussRat(1))
        aut = PolyAutomorphism((one - x, y), (one - x, y))
        h = x * (x * y - one)
        assert pushforward_polynomial(h, aut) == y * (one - x) ** 2 + (x - one)

    def test_pushforward_respects_products(self):
        rng = random.Random(43)
        aut = shear_automorphism()
        for _ in range(15):
            f = random_bipoly(rng, 3)
            g = random_bipoly(rng, 3)
            assert pushforward_polynomial(f * g, aut) == \
                pushforward_polynomial(f, aut) * pushforward_polynomial(g, aut)

    def test_oneform_pushforward_inverts(self):
        rng = random.Random(47)
        aut = shear_automorphism()
        inverse_aut = PolyAutomorphism(aut.inverse, aut.forward)
        for _ in range(10):
            w = random_oneform(rng, 3)
            back = pushforward_oneform(pushforward_oneform(w, aut), inverse_aut)
            assert back.A == w.A and back.B == w.B


class TestBasisReduction:
    def test_round_trip_identity(self):
        rng = random.Random(53)
        for _ in range(40):
            w = random_oneform(rng, 5)
            coeffs, q_poly = reduce_to_nonexact_basis(w)
            rebuilt = OneForm.d(q_poly) + basis_combination(coeffs)
            assert rebuilt.A == w.A and rebuilt.B == w.B

    def test_basis_indices_valid(self):
        rng = random.Random(59)
        for _ in range(40):
            coeffs, _ = reduce_to_nonexact_basis(random_oneform(rng, 5))
            assert all(j >= 1 and i >= 0 for (i, j) in coeffs)

    def test_pure_dx_j0_terms_are_exact(self):
        w = OneForm(BiPoly({(3, 0): GaussRat(2)}), BiPoly())
        coeffs, q_poly = reduce_to_nonexact_basis(w)
        assert not coeffs
        assert q_poly == BiPoly({(4, 0): GaussRat(1) / GaussRat(2)})

    def test_exact_form_of_xy(self):
        # d(xy) = y dx + x dy reduces with no basis component
        coeffs, _ = reduce_to_nonexact_basis(OneForm.d(BiPoly({(1, 1): GaussRat(1)})))
        assert not coeffs
