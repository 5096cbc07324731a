"""Algebraic equivalences and reduction to the non-exact 1-form basis.

A pair (psi, sigma) of a polynomial automorphism of the plane and an
affine reparametrization of the value line carries a Hamiltonian and a
1-form into normal-form coordinates.  Any polynomial 1-form decomposes as
an exact part dQ plus a combination of the basis monomials x^i y^j dx
with j >= 1, which is the shape the residue machinery consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

from .algebra import ONE, ZERO, BiPoly, GaussRat, Q


class AutomorphismError(ValueError):
    """The supplied forward/inverse pair does not compose to the identity."""


@dataclass(frozen=True)
class PolyAutomorphism:
    """Plane automorphism with explicit inverse, plus an affine value map.

    forward = (psi1, psi2), inverse = (phi1, phi2), sigma(c) = s1*c + s0.
    Both compositions are verified symbolically at construction.
    """

    forward: Tuple[BiPoly, BiPoly]
    inverse: Tuple[BiPoly, BiPoly]
    s1: GaussRat = ONE
    s0: GaussRat = ZERO

    def __post_init__(self):
        if not self.s1:
            raise AutomorphismError("sigma must be invertible: s1 != 0")
        x, y = BiPoly.var(0), BiPoly.var(1)
        f1, f2 = self.forward
        g1, g2 = self.inverse
        if f1.compose(g1, g2) != x or f2.compose(g1, g2) != y:
            raise AutomorphismError("forward(inverse) is not the identity")
        if g1.compose(f1, f2) != x or g2.compose(f1, f2) != y:
            raise AutomorphismError("inverse(forward) is not the identity")

    @classmethod
    def identity(cls) -> "PolyAutomorphism":
        x, y = BiPoly.var(0), BiPoly.var(1)
        return cls((x, y), (x, y))


@dataclass(frozen=True)
class OneForm:
    """Polynomial 1-form A dx + B dy."""

    A: BiPoly
    B: BiPoly

    @property
    def degree(self):
        return max(self.A.total_degree, self.B.total_degree)

    def is_zero(self) -> bool:
        return self.A.is_zero() and self.B.is_zero()

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm(self.A + other.A, self.B + other.B)

    def __sub__(self, other: "OneForm") -> "OneForm":
        return OneForm(self.A - other.A, self.B - other.B)

    @classmethod
    def d(cls, Q_poly: BiPoly) -> "OneForm":
        """The exact form dQ."""
        return cls(Q_poly.partial(0), Q_poly.partial(1))


def pushforward_polynomial(H: BiPoly, aut: PolyAutomorphism) -> BiPoly:
    """sigma(H(psi^{-1}(x, y))), fully expanded."""
    g1, g2 = aut.inverse
    composed = H.compose(g1, g2)
    return composed.scale(aut.s1) + BiPoly.const(aut.s0)


def pushforward_oneform(w: OneForm, aut: PolyAutomorphism) -> OneForm:
    """sigma' times the pushforward of w, computed as pullback by psi^{-1}."""
    g1, g2 = aut.inverse
    a_new = w.A.compose(g1, g2)
    b_new = w.B.compose(g1, g2)
    out_a = a_new * g1.partial(0) + b_new * g2.partial(0)
    out_b = a_new * g1.partial(1) + b_new * g2.partial(1)
    return OneForm(out_a.scale(aut.s1), out_b.scale(aut.s1))


def reduce_to_nonexact_basis(w: OneForm):
    """Write w = dQ + sum coeffs[i, j] * x^i y^j dx with j >= 1.

    A dx terms with j = 0 integrate directly into Q; each B dy monomial
    b x^i y^j dy contributes d(b x^i y^{j+1}/(j+1)) minus
    (i b/(j+1)) x^{i-1} y^{j+1} dx.
    """
    coeffs: Dict[Tuple[int, int], GaussRat] = {}
    q_terms: Dict[Tuple[int, int], GaussRat] = {}

    def bump(store, key, value):
        s = store.get(key, ZERO) + value
        if s:
            store[key] = s
        else:
            store.pop(key, None)

    for (i, j), a in w.A.terms.items():
        if j >= 1:
            bump(coeffs, (i, j), a)
        else:
            bump(q_terms, (i + 1, 0), a * GaussRat(Q(1, i + 1)))
    for (i, j), b in w.B.terms.items():
        inv = GaussRat(Q(1, j + 1))
        bump(q_terms, (i, j + 1), b * inv)
        if i >= 1:
            bump(coeffs, (i - 1, j + 1), -b * GaussRat(i) * inv)
    return coeffs, BiPoly(q_terms)


def basis_combination(coeffs: Dict[Tuple[int, int], GaussRat]) -> OneForm:
    """The 1-form sum coeffs[i, j] * x^i y^j dx."""
    return OneForm(BiPoly(coeffs), BiPoly())
