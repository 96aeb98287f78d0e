"""End-to-end classification: extreme and exposed points of the unit ball.

A unit-norm polynomial supported on a lacunary exponent set is *extreme*
exactly when its constraint matrix has rank twice the shared-disk-zero
count, and *exposed* exactly when the kernel of the tilde matrix meets the
nonnegativity cone in a one-dimensional set.  Both criteria are decided
here, with cheap structural shortcuts recorded in the report:

* fewer forbidden exponents than shared disk zeros forces non-extreme;
* no multiple circle zeros collapses exposed to extreme;
* a full-rank tilde matrix is already sufficient for exposed.

Every negative verdict ships a constructive witness.  Non-extreme: a
perturbation q in the same lacunary class with q/p real, bounded and
nonconstant on the circle.  Extreme-but-not-exposed: a q with q/p
additionally nonnegative, so any functional supporting p also supports
p + t q.  Witnesses are validated before they are returned (spectrum
membership, grid realness/nonnegativity, nonconstancy) and validation
failure is an error, never a silent downgrade.

The verdict pair can also be ``None`` when float rank decisions hit the
indeterminate band; callers see why in ``diagnostics`` and the CLI maps
that state to its own exit code.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction

import numpy as np

from .circle_analysis import l1_norm, find_zeros
from .errors import (
    AuditMismatch,
    IllConditionedZeros,
    RankIndeterminate,
    SpectrumViolation,
    UnsupportedMode,
    WitnessValidationFailed,
)
from .factorization import (
    CanonicalData,
    TildeData,
    canonical_factorization,
    real_symbol_on_circle,
    tilde_factorization,
)
from .matrix_builder import BlockMatrix, KernelBasis, build_matrix, rank_and_kernel
from .plus_cone import (
    CoefVector,
    certify_nonneg_exact,
    is_plus,
    plus_dimension,
    proportional,
)
from .poly_core import (
    ComplexPoly,
    GaussianRational,
    LacunaryPattern,
    parse_poly,
    spectrum,
    spectrum_in,
)


@dataclasses.dataclass
class ClassifyOptions:
    mode: str = "auto"  # auto | exact | float
    eps_circle: float = 1e-8
    rank_gap: float = 10.0
    spectrum_tol: float | None = None  # relative cutoff for support checks
    audit: bool = False
    infer_pattern: bool = False
    generate_witnesses: bool = True
    witness_grid: int = 2048


@dataclasses.dataclass(frozen=True)
class Witness:
    kind: str  # "non_extreme" | "non_exposed"
    vector: CoefVector
    perturbation: ComplexPoly
    spectrum: tuple[int, ...]
    multiplier_bound: float
    checks: dict


@dataclasses.dataclass
class ClassificationReport:
    pattern: LacunaryPattern
    polynomial: ComplexPoly
    mode: str
    norm: float
    norm_error_bound: float
    scale: float
    canonical: CanonicalData
    tilde: TildeData
    matrix: BlockMatrix
    matrix_tilde: BlockMatrix
    kernel: KernelBasis | None
    kernel_tilde: KernelBasis | None
    dim_plus: int | None
    extreme: bool | None
    exposed: bool | None
    fast_path_extreme: str
    fast_path_exposed: str
    witnesses: tuple[Witness, ...]
    diagnostics: dict
    audit: dict

    @property
    def undecided(self) -> bool:
        return self.extreme is None or self.exposed is None


# ---------------------------------------------------------------------------
# pattern handling
# ---------------------------------------------------------------------------


def infer_pattern(p: ComplexPoly, tol: float | None = None) -> LacunaryPattern:
    """Largest pattern consistent with p: every vanishing interior coefficient
    is treated as forbidden."""
    if p.deg < 1:
        raise ValueError("need degree at least 1 to infer a pattern")
    support = set(spectrum(p, tol))
    forbidden = [k for k in range(1, p.deg) if k not in support]
    return LacunaryPattern(p.deg, forbidden)


def _resolve_mode(p: ComplexPoly, mode: str) -> ComplexPoly:
    if mode == "auto":
        return p
    if mode == "float":
        return p.to_float()
    if mode == "exact":
        if p.mode != "exact":
            raise UnsupportedMode(
                "exact mode requested for a polynomial with float coefficients"
            )
        return p
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# witness machinery
# ---------------------------------------------------------------------------


def symbol_to_poly(v: CoefVector, half_degree: int) -> ComplexPoly:
    """The polynomial z^h * tau_v(z) whose circle values are e^{iht} tau_v(t)."""
    h = half_degree
    if v.d > h:
        raise ValueError("vector degree exceeds the requested half degree")
    if v.is_exact:
        coeffs = [GaussianRational(0) for _ in range(h + v.d + 1)]
        coeffs[h] = GaussianRational(2 * Fraction(v.alpha[0]))
        for l in range(1, v.d + 1):
            g = GaussianRational(Fraction(v.alpha[l]), Fraction(v.beta[l - 1]))
            coeffs[h + l] = g
            coeffs[h - l] = g.conjugate()
        return ComplexPoly(coeffs)
    coeffs_f = [0j] * (h + v.d + 1)
    coeffs_f[h] = complex(2.0 * float(v.alpha[0]))
    for l in range(1, v.d + 1):
        g = complex(float(v.alpha[l]), float(v.beta[l - 1]))
        coeffs_f[h + l] = g
        coeffs_f[h - l] = g.conjugate()
    return ComplexPoly(coeffs_f)


def _grid_multiplier(
    numer: ComplexPoly, denom: ComplexPoly, grid: int
) -> tuple[np.ndarray, np.ndarray]:
    """Values of numer/denom on the grid points where denom is not tiny."""
    t = 2 * np.pi * np.arange(grid) / grid
    z = np.exp(1j * t)
    nv = numer.eval_many(z)
    dv = denom.eval_many(z)
    cutoff = 1e-6 * (float(np.max(np.abs(dv))) or 1.0)
    keep = np.abs(dv) > cutoff
    return t[keep], nv[keep] / dv[keep]


def _validate_witness(
    kind: str,
    v: CoefVector,
    q: ComplexPoly,
    pattern: LacunaryPattern,
    factor: ComplexPoly,
    half_degree: int,
    grid: int,
) -> dict | None:
    """Run the witness checks; a dict of measurements on success, None on failure."""
    if q.is_zero():
        return None
    try:
        if not spectrum_in(q, pattern):
            return None
    except Exception:
        return None
    Q = symbol_to_poly(v, half_degree)
    _, h = _grid_multiplier(Q, factor, grid)
    if len(h) == 0:
        return None
    im_max = float(np.max(np.abs(h.imag)))
    h_scale = float(np.max(np.abs(h.real)))
    if im_max > 1e-8 * (1.0 + h_scale):
        return None
    spread = float(np.max(h.real) - np.min(h.real))
    if spread <= 1e-6 * max(1.0, h_scale):
        return None
    checks = {
        "spectrum_ok": True,
        "imag_max": im_max,
        "spread": spread,
        "multiplier_max": h_scale,
    }
    if kind == "non_exposed":
        neg = float(np.min(h.real))
        if neg < -1e-8 * (1.0 + h_scale):
            return None
        checks["min_multiplier"] = neg
    return checks


def _exact_plus_candidates(
    kernel: KernelBasis, seed: CoefVector | None
) -> list[CoefVector]:
    """Rational kernel vectors that certify nonnegative exactly, cheap ones first."""
    if not kernel.exact:
        return []
    basis = list(kernel.vectors)
    cands: list[CoefVector] = []
    pool: list[CoefVector] = []
    pool.extend(basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            pool.append(_vec_add(basis[i], basis[j]))
            pool.append(_vec_sub(basis[i], basis[j]))
    if seed is not None and seed.is_exact:
        for b in basis:
            pool.append(_vec_add(b, seed))
            pool.append(_vec_add(_vec_add(b, seed), seed))
    for cand in pool:
        try:
            ok, _ = certify_nonneg_exact(cand)
        except ValueError:
            continue
        if ok and any(x != 0 for x in list(cand.alpha) + list(cand.beta)):
            cands.append(cand)
    return cands


def _vec_add(u: CoefVector, v: CoefVector) -> CoefVector:
    return CoefVector(
        u.d,
        tuple(a + b for a, b in zip(u.alpha, v.alpha)),
        tuple(a + b for a, b in zip(u.beta, v.beta)),
    )


def _vec_sub(u: CoefVector, v: CoefVector) -> CoefVector:
    return CoefVector(
        u.d,
        tuple(a - b for a, b in zip(u.alpha, v.alpha)),
        tuple(a - b for a, b in zip(u.beta, v.beta)),
    )


def make_non_extreme_witness(
    canonical: CanonicalData,
    kernel: KernelBasis,
    seed: CoefVector | None,
    pattern: LacunaryPattern,
    grid: int = 2048,
) -> Witness:
    """Perturbation q with q/p real and nonconstant, from a kernel vector.

    Candidates are taken in kernel order, skipping anything proportional to
    the canonical vector (whose perturbation would only rescale p).
    """
    for v in kernel.vectors:
        if seed is not None and proportional(v, seed):
            continue
        Q = symbol_to_poly(v, canonical.m)
        q = Q * canonical.cofactor
        checks = _validate_witness(
            "non_extreme", v, q, pattern, canonical.disk_factor, canonical.m, grid
        )
        if checks is not None:
            return Witness(
                kind="non_extreme",
                vector=v,
                perturbation=q,
                spectrum=tuple(spectrum(q)),
                multiplier_bound=checks["multiplier_max"],
                checks=checks,
            )
    raise WitnessValidationFailed(
        "no kernel vector yielded a valid non-extreme perturbation"
    )


def make_non_exposed_witness(
    tilde: TildeData,
    kernel_tilde: KernelBasis,
    seed_tilde: CoefVector | None,
    pattern: LacunaryPattern,
    plus_vectors: list[CoefVector] | None = None,
    grid: int = 2048,
) -> Witness:
    """Perturbation q with q/p real, *nonnegative* and nonconstant.

    Exactly certified rational kernel vectors are preferred; vectors found by
    the cone search are used as a fallback and are vetted by the same grid
    validation as everything else.
    """
    candidates = _exact_plus_candidates(kernel_tilde, seed_tilde)
    if plus_vectors:
        candidates.extend(plus_vectors)
    if not candidates:
        _, found = plus_dimension(
            [v.as_array() for v in kernel_tilde.vectors], seed=seed_tilde
        )
        candidates.extend(found)
    for v in candidates:
        if seed_tilde is not None and proportional(v, seed_tilde):
            continue
        Q = symbol_to_poly(v, tilde.m_tilde)
        q = Q * tilde.reduced_cofactor
        checks = _validate_witness(
            "non_exposed", v, q, pattern, tilde.total_factor, tilde.m_tilde, grid
        )
        if checks is not None:
            return Witness(
                kind="non_exposed",
                vector=v,
                perturbation=q,
                spectrum=tuple(spectrum(q)),
                multiplier_bound=checks["multiplier_max"],
                checks=checks,
            )
    raise WitnessValidationFailed(
        "no nonnegative kernel vector yielded a valid non-exposed perturbation"
    )


# ---------------------------------------------------------------------------
# the classifier
# ---------------------------------------------------------------------------


def classify(
    p,
    pattern: LacunaryPattern | None = None,
    options: ClassifyOptions | None = None,
) -> ClassificationReport:
    """Classify p as an extreme / exposed point of the unit ball of its class."""
    opt = options or ClassifyOptions()
    if isinstance(p, str):
        p = parse_poly(p)
    p = _resolve_mode(p, opt.mode)
    if p.deg < 0:
        raise ValueError("the zero polynomial is not in the unit sphere")
    if pattern is None:
        if not opt.infer_pattern:
            raise ValueError(
                "no pattern given; pass one or enable infer_pattern explicitly"
            )
        pattern = infer_pattern(p, tol=opt.spectrum_tol)
    if p.deg > pattern.N:
        raise SpectrumViolation(
            f"degree {p.deg} exceeds the pattern bound {pattern.N}"
        )
    if not spectrum_in(p, pattern, tol=opt.spectrum_tol):
        raise SpectrumViolation(
            "polynomial has energy at a forbidden exponent of the pattern"
        )

    norm_res = l1_norm(p)
    scale = 1.0 / norm_res.value

    canonical = canonical_factorization(p, pattern.N, eps_circle=opt.eps_circle)
    tilde = tilde_factorization(p, pattern.N, canonical, eps_circle=opt.eps_circle)

    forbidden = tuple(pattern.forbidden)
    mat = build_matrix(canonical.coef, forbidden, canonical.m, kind="plain")
    mat_tilde = build_matrix(tilde.coef, forbidden, tilde.m_tilde, kind="tilde")

    coef_scale = max(
        (abs(complex(c)) for c in canonical.coef.values()), default=0.0
    )
    coef_scale_t = max(
        (abs(complex(c)) for c in tilde.coef.values()), default=0.0
    )

    diagnostics: dict = {
        "canonical_mode": canonical.mode,
        "tilde_mode": tilde.mode,
        "norm_panels": norm_res.panels,
    }
    audit_log: dict = {"performed": opt.audit, "checks": [], "mismatches": []}

    seed = _safe_seed(canonical.disk_factor, canonical.m)
    seed_tilde = _safe_seed(tilde.total_factor, tilde.m_tilde)

    kernel = kernel_tilde = None
    extreme = exposed = None
    dim_plus = None
    fast_extreme = "rank"
    fast_exposed = ""
    witnesses: list[Witness] = []

    try:
        kernel = rank_and_kernel(mat, gap_threshold=opt.rank_gap, scale=coef_scale)
        kernel_tilde = rank_and_kernel(
            mat_tilde, gap_threshold=opt.rank_gap, scale=coef_scale_t
        )
    except RankIndeterminate as exc:
        diagnostics["undecided_reason"] = str(exc)
        diagnostics["singular_values"] = list(exc.singular_values or ())
        return _report(
            pattern, p, norm_res, scale, canonical, tilde, mat, mat_tilde,
            kernel, kernel_tilde, None, None, None, "rank", "", (), diagnostics,
            audit_log,
        )

    _check_seed_membership(mat, seed, diagnostics, "plain")
    _check_seed_membership(mat_tilde, seed_tilde, diagnostics, "tilde")

    if pattern.M < canonical.m:
        fast_extreme = "row_deficit"
    extreme = kernel.rank == 2 * canonical.m
    if fast_extreme == "row_deficit" and extreme:
        raise AuditMismatch(
            "row-deficit shortcut predicts non-extreme but the rank criterion disagrees"
        )

    has_multiple_circle_zero = any(lam >= 2 for _, lam, _ in tilde.circle_zeros)

    if not extreme:
        exposed = False
        fast_exposed = "not_extreme"
    elif not has_multiple_circle_zero:
        exposed = extreme
        fast_exposed = "simple_circle_zeros"
    elif kernel_tilde.rank == 2 * tilde.m_tilde:
        exposed = True
        fast_exposed = "tilde_full_rank"

    found_plus: list[CoefVector] | None = None
    if exposed is None:
        fast_exposed = "plus_dimension"
        dim_plus, found_plus = plus_dimension(
            [v.as_array() for v in kernel_tilde.vectors], seed=seed_tilde
        )
        exposed = dim_plus == 1
        diagnostics["plus_vectors_found"] = len(found_plus)

    if opt.audit:
        _run_audit(
            p, pattern, canonical, tilde, kernel, kernel_tilde,
            seed_tilde, extreme, exposed, fast_exposed, dim_plus, audit_log,
            opt,
        )

    if opt.generate_witnesses:
        if extreme is False:
            witnesses.append(
                make_non_extreme_witness(
                    canonical, kernel, seed, pattern, grid=opt.witness_grid
                )
            )
        if exposed is False:
            witnesses.append(
                make_non_exposed_witness(
                    tilde, kernel_tilde, seed_tilde, pattern,
                    plus_vectors=found_plus, grid=opt.witness_grid,
                )
            )

    return _report(
        pattern, p, norm_res, scale, canonical, tilde, mat, mat_tilde,
        kernel, kernel_tilde, dim_plus, extreme, exposed,
        fast_extreme, fast_exposed, tuple(witnesses), diagnostics, audit_log,
    )


def _safe_seed(factor: ComplexPoly, half_degree: int) -> CoefVector | None:
    if factor.deg < 0:
        return None
    try:
        return real_symbol_on_circle(factor, half_degree)
    except Exception:
        return None


def _check_seed_membership(
    mat: BlockMatrix, seed: CoefVector | None, diagnostics: dict, label: str
) -> None:
    if seed is None:
        return
    arr = mat.as_array()
    if arr.size == 0:
        return
    resid = float(np.max(np.abs(arr @ seed.as_array())))
    norm = float(np.max(np.abs(arr)))
    diagnostics[f"seed_residual_{label}"] = resid
    if resid > 1e-8 * max(1.0, norm):
        raise IllConditionedZeros(
            f"canonical vector fails the kernel equations of the {label} matrix; "
            "zero identification is inconsistent",
            diagnostics={"residual": resid, "matrix": label},
        )


def _run_audit(
    p, pattern, canonical, tilde, kernel, kernel_tilde, seed_tilde,
    extreme, exposed, fast_exposed, dim_plus, audit_log, opt,
) -> None:
    if pattern.M == 0:
        audit_log["checks"].append("full_space_route")
        fs = classify_full_space(p, N=pattern.N, eps_circle=opt.eps_circle)
        if fs.extreme != extreme or fs.exposed != exposed:
            audit_log["mismatches"].append("full_space_route")
            raise AuditMismatch(
                f"zero-structure route says extreme={fs.extreme} exposed={fs.exposed}, "
                f"matrix route says extreme={extreme} exposed={exposed}"
            )
    if exposed is not None and fast_exposed in (
        "simple_circle_zeros", "tilde_full_rank", "not_extreme",
    ):
        audit_log["checks"].append("plus_dimension_cross_check")
        dp, _ = plus_dimension(
            [v.as_array() for v in kernel_tilde.vectors], seed=seed_tilde
        )
        audit_log["dim_plus_audit"] = dp
        if (dp == 1) != exposed:
            audit_log["mismatches"].append("plus_dimension_cross_check")
            raise AuditMismatch(
                f"shortcut {fast_exposed} says exposed={exposed} but the cone "
                f"dimension is {dp}"
            )
    else:
        audit_log["dim_plus_audit"] = dim_plus


def _report(
    pattern, p, norm_res, scale, canonical, tilde, mat, mat_tilde,
    kernel, kernel_tilde, dim_plus, extreme, exposed,
    fast_extreme, fast_exposed, witnesses, diagnostics, audit_log,
) -> ClassificationReport:
    return ClassificationReport(
        pattern=pattern,
        polynomial=p,
        mode=canonical.mode,
        norm=norm_res.value,
        norm_error_bound=norm_res.abs_error_bound,
        scale=scale,
        canonical=canonical,
        tilde=tilde,
        matrix=mat,
        matrix_tilde=mat_tilde,
        kernel=kernel,
        kernel_tilde=kernel_tilde,
        dim_plus=dim_plus,
        extreme=extreme,
        exposed=exposed,
        fast_path_extreme=fast_extreme,
        fast_path_exposed=fast_exposed,
        witnesses=witnesses,
        diagnostics=diagnostics,
        audit=audit_log,
    )


# ---------------------------------------------------------------------------
# independent route for the no-gap case
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class FullSpaceReport:
    extreme: bool
    exposed: bool
    shared_disk_multiplicity: int
    circle_multiplicities: tuple[int, ...]


def classify_full_space(
    p, N: int | None = None, eps_circle: float = 1e-8
) -> FullSpaceReport:
    """Classification for the full exponent range 0..N, by zero structure only.

    With no forbidden exponents, extreme means no zero is shared with the
    conjugate-reciprocal inside the disk, and exposed additionally requires
    every circle zero to be simple.  This route never builds a matrix, which
    makes it an independent cross-check of the rank criterion.
    """
    if isinstance(p, str):
        p = parse_poly(p)
    if p.deg < 0:
        raise ValueError("the zero polynomial is not in the unit sphere")
    if N is None:
        N = p.deg
    if p.deg > N:
        raise ValueError(f"degree {p.deg} exceeds N={N}")
    clusters = find_zeros(p, eps_circle=eps_circle)
    disk = [c for c in clusters if c.region == "disk"]
    m = 0
    for c in disk:
        loc = complex(c.location)
        if abs(loc) == 0.0:
            m += min(c.multiplicity, N - p.deg)
            continue
        reflected = 1.0 / np.conj(loc)
        for other in clusters:
            if abs(complex(other.location) - reflected) <= 1e-6 * max(
                1.0, abs(reflected)
            ):
                m += min(c.multiplicity, other.multiplicity)
                break
    circle_mults = tuple(
        c.multiplicity for c in clusters if c.region == "circle"
    )
    extreme = m == 0
    exposed = extreme and all(lam <= 1 for lam in circle_mults)
    return FullSpaceReport(extreme, exposed, m, circle_mults)
