"""Floating-point verification independent of the exact engine.

Contour integrals are computed by the trapezoidal rule on circles with
sample doubling (periodic integrands converge spectrally), both on the
rectified t-plane and along the pulled-back fiber loops.  A simultaneous-
iteration root finder locates zeros of the exact integrals for reporting.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, List, Optional

from .algebra import RatFunc, UniPoly
from .errors import NonConvergence
from .rectify import CanonicalCycle, RectifyingMap
from .transform import OneForm

TWO_PI_I = 2j * math.pi
REL_TOL = 1e-10
MAX_SAMPLES = 2 ** 20


@dataclass(frozen=True)
class ContourSpec:
    """Circle around one puncture: center, radius and starting sample count."""

    center: complex
    radius: float
    samples: int = 64

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("contour radius must be positive")
        if self.samples < 4 or self.samples & (self.samples - 1):
            raise ValueError("sample count must be a power of two >= 4")


def default_contour(rm: RectifyingMap, cycle: CanonicalCycle,
                    c_value: complex) -> ContourSpec:
    """Circle around the cycle's puncture, radius a quarter of the nearest gap."""
    locations = [rm.puncture_location(kind).evaluate_complex(c_value)
                 for kind in rm.facts.puncture_kinds]
    center = rm.puncture_location(cycle.puncture).evaluate_complex(c_value)
    gaps = [abs(center - other) for other in locations if abs(center - other) > 0]
    radius = min(gaps) / 4 if gaps else 1.0
    return ContourSpec(center, radius)


def _integrate_circle(integrand: Callable[[complex], complex],
                      spec: ContourSpec) -> complex:
    """Trapezoidal contour integral with doubling until 1e-10 relative."""
    samples = spec.samples
    previous = None
    while samples <= MAX_SAMPLES:
        total = 0j
        step = 2 * math.pi / samples
        for idx in range(samples):
            point = spec.center + spec.radius * cmath.exp(1j * step * idx)
            dz = 1j * spec.radius * cmath.exp(1j * step * idx)
            total += integrand(point) * dz
        estimate = total * step
        if previous is not None:
            if abs(estimate - previous) <= REL_TOL * (1 + abs(estimate)):
                return estimate
        previous = estimate
        samples *= 2
    raise NonConvergence(
        f"contour integral did not converge within {MAX_SAMPLES} samples "
        f"(center {spec.center}, radius {spec.radius}); a pole is likely "
        f"too close to the contour")


def contour_integral_t(eta_t: RatFunc, c_value: complex,
                       spec: ContourSpec) -> complex:
    """Numeric loop integral of eta_t dt, divided by 2*pi*sqrt(-1)."""
    return _integrate_circle(lambda t: eta_t.evaluate(t, c_value), spec) / TWO_PI_I


def contour_integral_fiber(w: OneForm, rm: RectifyingMap, cycle: CanonicalCycle,
                           c_value: complex,
                           spec: Optional[ContourSpec] = None) -> complex:
    """Numeric integral of w along the fiber loop R^{-1}(circle), over 2*pi*i.

    The loop is parametrized through the inverse map: for t on the circle,
    (x, y) = (inverse_x, inverse_y)(t, c) and dx = (d inverse_x / dt) dt,
    dy likewise.
    """
    if spec is None:
        spec = default_contour(rm, cycle, c_value)
    dx_dt = rm.inverse_x.derivative(0)
    dy_dt = rm.inverse_y.derivative(0)

    def integrand(t: complex) -> complex:
        x_val = rm.inverse_x.evaluate(t, c_value)
        y_val = rm.inverse_y.evaluate(t, c_value)
        return (w.A.evaluate(x_val, y_val) * dx_dt.evaluate(t, c_value)
                + w.B.evaluate(x_val, y_val) * dy_dt.evaluate(t, c_value))

    return _integrate_circle(integrand, spec) / TWO_PI_I


def locate_roots(p: UniPoly, tol: float = 1e-10,
                 max_iterations: int = 1000) -> List[complex]:
    """All complex roots by simultaneous iteration; count equals the degree."""
    if p.is_zero():
        raise ValueError("cannot locate roots of the zero polynomial")
    degree = int(p.degree)
    if degree == 0:
        return []
    lead = p.coeffs[-1].to_complex()
    monic = [c.to_complex() / lead for c in p.coeffs]

    def evaluate(z: complex) -> complex:
        acc = 0j
        for c in reversed(monic):
            acc = acc * z + c
        return acc

    # Standard staggered starting points on a spiral
    roots = [(0.4 + 0.9j) ** (idx + 1) for idx in range(degree)]
    for _ in range(max_iterations):
        shift = 0.0
        for idx in range(degree):
            denom = 1 + 0j
            for other in range(degree):
                if other != idx:
                    denom *= roots[idx] - roots[other]
            if denom == 0:
                roots[idx] += 1e-8 * (1 + 1j)
                denom = 1e-8
            delta = evaluate(roots[idx]) / denom
            roots[idx] -= delta
            shift = max(shift, abs(delta))
        if shift < tol and all(abs(evaluate(z)) < tol * (1 + abs(z) ** degree)
                               for z in roots):
            return roots
    raise NonConvergence(
        f"root finder did not reach residual {tol} in {max_iterations} iterations")
