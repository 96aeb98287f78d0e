"""Splitting off common disk zeros and doubled circle zeros.

Writes p = G R where G collects each zero a shared by p and its
conjugate-reciprocal p* inside the open disk, paired with its reflection:
G = prod (z - a)^m (1 - conj(a) z)^m.  The tilde variant additionally
absorbs floor(multiplicity/2) copies of every circle zero of p, reflected
the same way.  The cofactors R and R~ carry the coefficient maps that the
rank criteria consume.

When the input has Gaussian-rational coefficients the factors are
reconstructed exactly: the float factor built from the clustered zeros is
rationalized coefficient-by-coefficient (growing denominator bounds) and
accepted only if exact division of p succeeds.  Configurations whose factor
is irrational (possible: the scalar normalization of G need not be rational
even for rational p) degrade to the float pipeline; verdicts downstream are
scale-invariant, so only exactness is lost, never correctness.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction

import numpy as np

from .circle_analysis import ZeroCluster, common_disk_zeros, find_zeros
from .errors import IllConditionedZeros, NotDivisible, NotHermitianSymmetric
from .plus_cone import CoefVector
from .poly_core import ComplexPoly, GaussianRational, conjugate_reciprocal, divide_exact

_RATIONALIZE_BOUNDS = (10**4, 10**7, 10**10)
_FLOAT_DIVISION_TOL = 1e-6


@dataclasses.dataclass(frozen=True)
class CanonicalData:
    """p = disk_factor * cofactor, with the shared-disk-zero bookkeeping."""

    disk_zeros: tuple[ZeroCluster, ...]
    m: int
    s: int
    disk_factor: ComplexPoly
    cofactor: ComplexPoly
    coef: dict
    zero_clusters: tuple[ZeroCluster, ...]
    mode: str  # "exact" if the factorization itself is exact, else "float"


@dataclasses.dataclass(frozen=True)
class TildeData:
    """p = total_factor * reduced_cofactor, circle zeros half-absorbed."""

    circle_zeros: tuple[tuple[complex, int, int], ...]  # (location, lam, mu)
    mu: int
    m_tilde: int
    s_tilde: int
    circle_factor: ComplexPoly
    total_factor: ComplexPoly
    reduced_cofactor: ComplexPoly
    coef: dict
    mode: str


def _build_factor_float(items) -> ComplexPoly:
    """prod (z - a)^m (1 - conj(a) z)^m as a float polynomial."""
    c = np.array([1.0 + 0.0j])
    for loc, mult in items:
        a = complex(loc)
        for _ in range(mult):
            c = np.convolve(c, np.array([-a, 1.0]))
            c = np.convolve(c, np.array([1.0, -np.conj(a)]))
    return ComplexPoly([complex(x) for x in c])


def _rationalize_coefficients(pf: ComplexPoly, bound: int):
    out = []
    for c in pf.coeffs:
        c = complex(c)
        re = Fraction(c.real).limit_denominator(bound)
        im = Fraction(c.imag).limit_denominator(bound)
        if abs(float(re) - c.real) > 1e-9 * max(1.0, abs(c.real)):
            return None
        if abs(float(im) - c.imag) > 1e-9 * max(1.0, abs(c.imag)):
            return None
        out.append(GaussianRational(re, im))
    return ComplexPoly(out)

def _factor_out(p: ComplexPoly, items) -> tuple[ComplexPoly, ComplexPoly, str]:
    """Divide the factor described by (location, multiplicity) items out of p."""
    factor_f = _build_factor_float(items)
    if p.mode == "exact":
        for bound in _RATIONALIZE_BOUNDS:
            cand = _rationalize_coefficients(factor_f, bound)
            if cand is None or cand.deg != factor_f.deg:
                continue
            try:
                quotient = divide_exact(p, cand)
            except NotDivisible:
                continue
            return cand, quotient, "exact"
    quotient = divide_exact(p, factor_f, tol=_FLOAT_DIVISION_TOL)
    return factor_f, quotient, "float"


def _coef_map(r: ComplexPoly) -> dict:
    return {k: r.coeffs[k] for k in range(r.deg + 1)}


def canonical_factorization(
    p: ComplexPoly, N: int, eps_circle: float = 1e-8
) -> CanonicalData:
    """Factor out the zeros shared with the conjugate-reciprocal inside the disk."""
    if p.deg < 0:
        raise ValueError("cannot factor the zero polynomial")
    if p.deg > N:
        raise ValueError(f"degree {p.deg} exceeds the ambient degree {N}")
    pstar = conjugate_reciprocal(p, N)
    clusters = find_zeros(p, eps_circle=eps_circle)
    shared, m = common_disk_zeros(p, pstar, eps_circle=eps_circle)
    s = N - 2 * m
    if s < 0:
        raise IllConditionedZeros(
            "shared disk multiplicity exceeds N/2",
            diagnostics={"m": m, "N": N},
        )
    if m == 0:
        G = ComplexPoly.one(p.mode)
        R = p
        mode = p.mode
    else:
        G, R, mode = _factor_out(p, [(c.location, c.multiplicity) for c in shared])
    if R.deg > s:
        raise IllConditionedZeros(
            "cofactor degree exceeds N - 2m; zero identification is inconsistent",
            diagnostics={"cofactor_degree": R.deg, "s": s},
        )
    return CanonicalData(
        disk_zeros=shared,
        m=m,
        s=s,
        disk_factor=G,
        cofactor=R,
        coef=_coef_map(R),
        zero_clusters=clusters,
        mode=mode,
    )


def tilde_factorization(
    p: ComplexPoly,
    N: int,
    canonical: CanonicalData,
    eps_circle: float = 1e-8,
) -> TildeData:
    """Extend the canonical factor by half of every multiple circle zero."""
    circle = [c for c in canonical.zero_clusters if c.region == "circle"]
    triples = tuple(
        (complex(c.location), c.multiplicity, c.multiplicity // 2) for c in circle
    )
    mu = sum(t[2] for t in triples)
    m_tilde = canonical.m + mu
    s_tilde = N - 2 * m_tilde
    if s_tilde < 0:
        raise IllConditionedZeros(
            "halved circle multiplicity exceeds the remaining degree budget",
            diagnostics={"m_tilde": m_tilde, "N": N},
        )
    if mu == 0:
        one = ComplexPoly.one(canonical.disk_factor.mode)
        return TildeData(
            circle_zeros=triples,
            mu=0,
            m_tilde=m_tilde,
            s_tilde=s_tilde,
            circle_factor=one,
            total_factor=canonical.disk_factor,
            reduced_cofactor=canonical.cofactor,
            coef=dict(canonical.coef),
            mode=canonical.mode,
        )
    doubled = [(loc, mu_j) for loc, _lam, mu_j in triples if mu_j >= 1]
    items = [(c.location, c.multiplicity) for c in canonical.disk_zeros]
    G_total, R_tilde, mode = _factor_out(p, items + doubled)
    circle_factor_f = _build_factor_float(doubled)
    if mode == "exact":
        try:
            circle_factor = divide_exact(G_total, canonical.disk_factor)
        except NotDivisible:
            circle_factor = circle_factor_f
    else:
        circle_factor = circle_factor_f
    if R_tilde.deg > s_tilde:
        raise IllConditionedZeros(
            "reduced cofactor degree exceeds N - 2m~",
            diagnostics={"degree": R_tilde.deg, "s_tilde": s_tilde},
        )
    return TildeData(
        circle_zeros=triples,
        mu=mu,
        m_tilde=m_tilde,
        s_tilde=s_tilde,
        circle_factor=circle_factor,
        total_factor=G_total,
        reduced_cofactor=R_tilde,
        coef=_coef_map(R_tilde),
        mode=mode,
    )


def real_symbol_on_circle(F: ComplexPoly, half_degree: int) -> CoefVector:
    """Coefficient vector of t -> e^{-i h t} F(e^{it}), h = half_degree.

    Requires the Hermitian symmetry F_{h+l} = conj(F_{h-l}) that makes the
    symbol real; raises :class:`NotHermitianSymmetric` otherwise.
    """
    h = half_degree
    if h < 0 or F.deg > 2 * h:
        raise ValueError("half_degree incompatible with the polynomial degree")
    exact = F.mode == "exact"
    scale = F.max_abs_coeff() or 1.0
    for l in range(h + 1):
        hi = F.coefficient(h + l)
        lo = F.coefficient(h - l)
        if exact:
            if hi != lo.conjugate():
                raise NotHermitianSymmetric(
                    f"coefficient {h + l} is not the conjugate of coefficient {h - l}"
                )
        else:
            if abs(complex(hi) - complex(lo).conjugate()) > 1e-9 * scale:
                raise NotHermitianSymmetric(
                    f"coefficients {h + l}/{h - l} break Hermitian symmetry "
                    f"beyond 1e-9 relative"
                )
    if exact:
        mid = F.coefficient(h)
        alpha = [mid.re / 2] + [F.coefficient(h + l).re for l in range(1, h + 1)]
        beta = [F.coefficient(h + l).im for l in range(1, h + 1)]
    else:
        alpha = [complex(F.coefficient(h)).real / 2.0] + [
            complex(F.coefficient(h + l)).real for l in range(1, h + 1)
        ]
        beta = [complex(F.coefficient(h + l)).imag for l in range(1, h + 1)]
    return CoefVector(h, tuple(alpha), tuple(beta))
