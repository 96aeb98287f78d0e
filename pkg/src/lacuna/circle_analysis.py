"""Circle-side analysis: L1 norm on the unit circle and zero structure.

The integral mean ``(1/2pi) int |p(e^it)| dt`` is computed by adaptive
composite Gauss-Legendre quadrature.  |p| is analytic between its circle
zeros, so panel boundaries are seeded at the arguments of near-circle roots;
every panel then sees a one-sided algebraic kink at worst and the composite
rule converges fast.

Zero finding reports clusters ``(location, multiplicity, region, residual)``.
Numeric multiplicity is ill-posed, so exact mode first splits the polynomial
by a square-free (Yun) decomposition and reads multiplicities off the
decomposition; float mode clusters companion-matrix roots and validates the
clustering by rebuilding the polynomial.
"""

from __future__ import annotations

import cmath
import dataclasses
import heapq
import math

import numpy as np

from .errors import IllConditionedZeros, QuadratureBudgetExceeded
from .poly_core import ComplexPoly, square_free_decomposition

_GL_LO = np.polynomial.legendre.leggauss(16)
_GL_HI = np.polynomial.legendre.leggauss(32)


@dataclasses.dataclass(frozen=True)
class NormResult:
    value: float
    abs_error_bound: float
    panels: int


@dataclasses.dataclass(frozen=True)
class ZeroCluster:
    location: complex
    multiplicity: int
    region: str  # "disk" | "circle" | "exterior"
    residual: float

    def with_region(self, region: str) -> "ZeroCluster":
        return ZeroCluster(self.location, self.multiplicity, region, self.residual)


def _sort_key(z: complex):
    ang = cmath.phase(z) % (2 * math.pi)
    # snap wrap-around noise so +pi and -pi variants of the same root agree
    if ang > 2 * math.pi - 1e-12:
        ang = 0.0
    return (round(ang, 9), abs(z))


def _panel_integrals(coeffs: np.ndarray, a: float, b: float):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    out = []
    for nodes, weights in (_GL_LO, _GL_HI):
        t = mid + half * nodes
        z = np.exp(1j * t)
        v = np.zeros_like(z)
        for c in coeffs[::-1]:
            v = v * z + c
        out.append(half * float(np.dot(weights, np.abs(v))))
    return out[0], out[1]


def l1_norm(p: ComplexPoly, tol: float = 1e-10, panel_budget: int = 20000) -> NormResult:
    """Integral mean of |p| over the unit circle.

    Parameters
    ----------
    p : ComplexPoly
        Nonzero polynomial, either mode.
    tol : float
        Target absolute error for the returned value.
    panel_budget : int
        Cap on the number of quadrature panels; exceeding it raises
        :class:`QuadratureBudgetExceeded`.

    Returns
    -------
    NormResult
        ``value`` with ``abs_error_bound`` (sum of per-panel error
        estimates plus rounding slack) and the panel count used.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no unit-norm representative")
    coeffs = p.float_coeffs()
    breaks: list[float] = []
    if p.deg >= 1:
        roots = np.roots(coeffs[::-1])
        for r in roots:
            if abs(abs(r) - 1.0) < 0.1:
                breaks.append(cmath.phase(complex(r)) % (2 * math.pi))
    breaks = sorted(set(breaks))
    if not breaks:
        edges = [2 * math.pi * k / 8 for k in range(9)]
    else:
        edges = breaks + [breaks[0] + 2 * math.pi]
        # keep panels from starting absurdly wide
        refined = []
        for a, b in zip(edges[:-1], edges[1:]):
            n = max(1, int(math.ceil((b - a) / (math.pi / 2))))
            refined.extend(a + (b - a) * k / n for k in range(n))
        refined.append(edges[-1])
        edges = refined

    heap = []
    serial = 0
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        lo, hi = _panel_integrals(coeffs, a, b)
        total += hi
        heapq.heappush(heap, (-abs(hi - lo), serial, a, b, hi))
        serial += 1

    while True:
        err = -sum(item[0] for item in heap)
        if err <= 0.5 * tol:
            break
        if len(heap) >= panel_budget:
            raise QuadratureBudgetExceeded(
                f"{len(heap)} panels reached with error estimate {err:.3e} > {tol:.1e}"
            )
        neg_est, _, a, b, hi = heapq.heappop(heap)
        total -= hi
        midpt = 0.5 * (a + b)
        for aa, bb in ((a, midpt), (midpt, b)):
            lo2, hi2 = _panel_integrals(coeffs, aa, bb)
            total += hi2
            heapq.heappush(heap, (-abs(hi2 - lo2), serial, aa, bb, hi2))
            serial += 1

    err = -sum(item[0] for item in heap)
    value = total / (2 * math.pi)
    bound = err / (2 * math.pi) + 32 * np.finfo(float).eps * abs(value)
    return NormResult(value=value, abs_error_bound=bound, panels=len(heap))


def normalize(p: ComplexPoly, tol: float = 1e-10) -> tuple[ComplexPoly, float]:
    """Unit-norm representative and the positive multiplier that was applied.

    Float mode returns ``(scale * p, scale)`` with ``scale = 1/||p||_1``.
    Exact mode leaves the coefficients untouched (they would become
    irrational) and returns ``(p, scale)``; callers carry the scale as a
    symbolic positive factor, which no classification criterion sees.
    """
    nr = l1_norm(p, tol=tol)
    scale = 1.0 / nr.value
    if p.mode == "float":
        return p * scale, scale
    return p, scale


# ---------------------------------------------------------------------------
# zeros
# ---------------------------------------------------------------------------


def _backward_error(coeffs: np.ndarray, r: complex) -> float:
    num = abs(np.polyval(coeffs[::-1], r))
    den = float(np.polyval(np.abs(coeffs[::-1]), abs(r)))
    return num / den if den > 0 else 0.0


def _newton_refine(coeffs: np.ndarray, dcoeffs: np.ndarray, r: complex, steps: int = 3) -> complex:
    for _ in range(steps):
        fv = np.polyval(coeffs[::-1], r)
        dv = np.polyval(dcoeffs[::-1], r)
        if dv == 0:
            break
        step = fv / dv
        if not np.isfinite(step):
            break
        r = r - step
    return complex(r)


def _region(r: complex, eps_circle: float) -> str:
    d = abs(r)
    if d < 1.0 - eps_circle:
        return "disk"
    if d <= 1.0 + eps_circle:
        return "circle"
    return "exterior"


def _cluster_roots(roots: np.ndarray, radius: float) -> list[tuple[complex, int]]:
    """Greedy single-linkage clustering of a root list."""
    remaining = list(roots)
    clusters = []
    while remaining:
        seed = remaining.pop()
        members = [seed]
        changed = True
        while changed:
            changed = False
            keep = []
            for r in remaining:
                if any(abs(r - m) <= radius for m in members):
                    members.append(r)
                    changed = True
                else:
                    keep.append(r)
            remaining = keep
        centroid = complex(np.mean(members))
        clusters.append((centroid, len(members)))
    return clusters


def _rebuild_score(coeffs: np.ndarray, clusters: list[tuple[complex, int]]) -> float:
    rebuilt = np.array([1.0 + 0j])
    for c, mult in clusters:
        for _ in range(mult):
            rebuilt = np.convolve(rebuilt, np.array([-c, 1.0]))
    rebuilt = rebuilt * coeffs[-1]
    if len(rebuilt) != len(coeffs):
        return math.inf
    scale = float(np.max(np.abs(coeffs)))
    return float(np.max(np.abs(rebuilt - coeffs))) / scale


def find_zeros(p: ComplexPoly, eps_circle: float = 1e-8) -> list[ZeroCluster]:
    """All zeros of p as certified clusters, sorted by argument then modulus.

    Parameters
    ----------
    p : ComplexPoly
        Nonzero polynomial.
    eps_circle : float
        Half-width of the annulus treated as "on the circle".

    Returns
    -------
    list of ZeroCluster
        Locations carry a backward-error ``residual``.  Exact mode certifies
        multiplicities through the square-free decomposition; float mode
        clusters companion-matrix roots (radius 1e-6, with a coarser and a
        finer fallback) and validates by rebuilding the polynomial, raising
        :class:`IllConditionedZeros` when no clustering reproduces the
        coefficients to 1e-6.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    clusters: list[ZeroCluster] = []
    k0 = p.order_at_zero()
    if k0 > 0:
        clusters.append(ZeroCluster(0j, k0, "disk", 0.0))
    body = ComplexPoly(p.coeffs[k0:], mode=p.mode)
    if body.deg >= 1:
        if p.mode == "exact":
            clusters.extend(_zeros_exact(body, eps_circle))
        else:
            clusters.extend(_zeros_float(body, eps_circle))
    clusters.sort(key=lambda c: _sort_key(c.location))
    return clusters


def _zeros_exact(body: ComplexPoly, eps_circle: float) -> list[ZeroCluster]:
    out = []
    for factor, mult in square_free_decomposition(body):
        fc = factor.float_coeffs()
        dfc = factor.derivative().float_coeffs()
        for r in np.roots(fc[::-1]):
            r = _newton_refine(fc, dfc, complex(r))
            res = _backward_error(fc, r)
            if res > 1e-6:
                raise IllConditionedZeros(
                    f"root {r} of a square-free factor has backward error {res:.2e}",
                    diagnostics={"factor_degree": factor.deg, "residual": res},
                )
            out.append(ZeroCluster(r, mult, _region(r, eps_circle), res))
    return out


def _zeros_float(body: ComplexPoly, eps_circle: float) -> list[ZeroCluster]:
    coeffs = body.float_coeffs()
    roots = np.roots(coeffs[::-1])
    best = None
    for radius in (1e-6, 1e-8, 1e-4):
        grouped = _cluster_roots(roots, radius)
        refined = []
        for c, mult in grouped:
            # centroid of a multiplicity-m scatter is already O(eps) accurate;
            # polish on the (m-1)th derivative where the zero is simple
            dk = body
            for _ in range(mult - 1):
                dk = dk.derivative()
            c = _newton_refine(dk.float_coeffs(), dk.derivative().float_coeffs(), c)
            refined.append((c, mult))
        score = _rebuild_score(coeffs, refined)
        if best is None or score < best[0]:
            best = (score, refined)
        if score <= 1e-10:
            break
    score, refined = best
    if score > 1e-6:
        raise IllConditionedZeros(
            f"no clustering of the roots reproduces the coefficients (score {score:.2e})",
            diagnostics={"score": score},
        )
    return [
        ZeroCluster(c, mult, _region(c, eps_circle), score) for c, mult in refined
    ]


def common_disk_zeros(
    p: ComplexPoly,
    pstar: ComplexPoly,
    eps_circle: float = 1e-8,
    match_radius: float = 1e-6,
) -> tuple[tuple[ZeroCluster, ...], int]:
    """Zeros shared by p and its conjugate reciprocal inside the open disk.

    Returns the clusters (with the shared multiplicity ``min`` of the two
    sides) and their total multiplicity.  The origin participates through the
    order of ``pstar`` at zero, i.e. through ``N - deg p``.
    """
    zp = [c for c in find_zeros(p, eps_circle) if c.region == "disk"]
    zs = [c for c in find_zeros(pstar, eps_circle) if c.region == "disk"]
    shared = []
    total = 0
    for a in zp:
        for b in zs:
            if abs(a.location - b.location) <= match_radius:
                mult = min(a.multiplicity, b.multiplicity)
                shared.append(ZeroCluster(a.location, mult, "disk", max(a.residual, b.residual)))
                total += mult
                break
    shared.sort(key=lambda c: _sort_key(c.location))
    return tuple(shared), total
