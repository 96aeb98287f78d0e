"""The cone of nonnegative trigonometric polynomials and its trace dimensions.

A coefficient vector ``(alpha_0..alpha_d, beta_1..beta_d)`` encodes the real
trigonometric polynomial

    tau(t) = 2 * (alpha_0 + sum_k alpha_k cos kt - beta_k sin kt)
           = sum_{|k|<=d} gamma_k e^{ikt},   gamma_k = alpha_k + i beta_k,

and the vector is called *plus* when tau >= 0 on the whole circle.  The
dimension of a subspace's trace on the plus cone (the span of its plus
vectors) is what ``plus_dimension`` computes.

Membership is decided by a global minimum scan (grid plus Newton polish on
the derivative); for vectors with rational entries the verdict is instead
certified exactly through a Cayley-transform numerator: tau >= 0 iff that
real polynomial has positive leading coefficient, an even degree deficit,
and no odd-multiplicity real root (counted by Sturm chains).  Positive
verdicts carry a Gram-matrix witness: a PSD matrix Q with
gamma_k = sum_j Q[j+k, j], built by spectral factorization of tau and
repaired, if needed, by alternating projections.

``find_plus_in_slice`` looks for a plus vector inside an affine slice of a
subspace by alternating projections between the PSD cone (eigenvalue
clipping) and the affine constraint set (least squares); ``plus_dimension``
grows a basis of plus vectors greedily with such probes and then certifies
completeness facially: the span of all plus vectors in V equals the set of
vectors whose tau vanishes at each circle zero of the accumulated interior
point to at least its order.
"""

from __future__ import annotations

import dataclasses
import math
from fractions import Fraction

import numpy as np

from .errors import FacialMismatch, SolverStalled


def _is_exact_entry(x) -> bool:
    return isinstance(x, (int, Fraction))


@dataclasses.dataclass(frozen=True)
class CoefVector:
    """Real coefficient vector of a trigonometric polynomial of degree <= d."""

    d: int
    alpha: tuple  # length d+1
    beta: tuple  # length d

    def __post_init__(self):
        if len(self.alpha) != self.d + 1 or len(self.beta) != self.d:
            raise ValueError("alpha needs d+1 entries and beta needs d entries")

    @property
    def is_exact(self) -> bool:
        return all(_is_exact_entry(x) for x in self.alpha) and all(
            _is_exact_entry(x) for x in self.beta
        )

    @staticmethod
    def from_array(x, d: int | None = None) -> "CoefVector":
        xs = list(x)
        if d is None:
            if len(xs) % 2 == 0:
                raise ValueError("coefficient array must have odd length 2d+1")
            d = (len(xs) - 1) // 2
        if len(xs) != 2 * d + 1:
            raise ValueError(f"expected {2 * d + 1} entries, got {len(xs)}")
        alpha = tuple(xs[: d + 1])
        beta = tuple(xs[d + 1 :])
        return CoefVector(d, alpha, beta)

    def as_array(self) -> np.ndarray:
        return np.array(
            [float(a) for a in self.alpha] + [float(b) for b in self.beta], dtype=float
        )

    def gamma(self) -> np.ndarray:
        """Analytic-side Fourier coefficients gamma_0..gamma_d (gamma_0 = 2 alpha_0)."""
        g = np.zeros(self.d + 1, dtype=complex)
        g[0] = 2.0 * float(self.alpha[0])
        for k in range(1, self.d + 1):
            g[k] = float(self.alpha[k]) + 1j * float(self.beta[k - 1])
        return g

    def tau(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        g = self.gamma()
        out = np.full_like(t, float(g[0].real), dtype=float)
        for k in range(1, self.d + 1):
            out += 2.0 * (g[k].real * np.cos(k * t) - g[k].imag * np.sin(k * t))
        return out

    def tau_derivative(self, t, order: int = 1) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        g = self.gamma()
        out = np.zeros_like(t, dtype=float)
        for k in range(1, self.d + 1):
            out += 2.0 * ((1j * k) ** order * g[k] * np.exp(1j * k * t)).real
        return out

    def scale(self) -> float:
        return float(np.max(np.abs(self.gamma()))) if self.d >= 0 else 0.0

    def __str__(self):
        return f"CoefVector(d={self.d}, alpha={self.alpha}, beta={self.beta})"


def proportional(u, v, tol: float = 1e-9) -> bool:
    """True when u and v span the same line (or one of them is ~zero).

    Accepts CoefVectors or plain coefficient arrays.
    """
    a = u.as_array() if isinstance(u, CoefVector) else np.asarray(u, dtype=float)
    b = v.as_array() if isinstance(v, CoefVector) else np.asarray(v, dtype=float)
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na <= tol or nb <= tol:
        return True
    bhat = b / nb
    resid = a - np.dot(a, bhat) * bhat
    return bool(np.linalg.norm(resid) <= tol * na)


def fejer_vector(d: int, shift: float = 0.0) -> CoefVector:
    """Coefficients of the (shifted) Fejer kernel: nonnegative by construction."""
    alpha = [Fraction(1, 2)] if shift == 0.0 else [0.5]
    beta = []
    for k in range(1, d + 1):
        if shift == 0.0:
            alpha.append(Fraction(d + 1 - k, d + 1))
            beta.append(Fraction(0))
        else:
            gk = (1.0 - k / (d + 1.0)) * np.exp(-1j * k * shift)
            alpha.append(float(gk.real))
            beta.append(float(gk.imag))
    return CoefVector(d, tuple(alpha), tuple(beta))


# ---------------------------------------------------------------------------
# global minimum on the circle
# ---------------------------------------------------------------------------


def min_on_circle(v: CoefVector) -> tuple[float, float]:
    """Location and value of the global minimum of tau over the circle.

    Dense grid of 8d+64 points, then Newton polish on tau' around every local
    grid minimum (guarded by bisection when curvature misbehaves).
    """
    g = v.gamma()
    if v.d == 0 or np.max(np.abs(g[1:])) == 0:
        return 0.0, float(g[0].real)
    # hoisted coefficient arrays shared by every polish iteration
    ks = np.arange(1, v.d + 1, dtype=float)
    gr = g[1:].real.astype(float)
    gi = g[1:].imag.astype(float)
    g0 = float(g[0].real)
    n = 8 * v.d + 64
    t = 2 * math.pi * np.arange(n) / n
    vals = v.tau(t)
    h = 2 * math.pi / n
    candidates = []
    for i in range(n):
        if vals[i] <= vals[(i - 1) % n] and vals[i] <= vals[(i + 1) % n]:
            candidates.append(_polish_minimum(ks, gr, gi, t[i], h))
    best_t, best_v = 0.0, math.inf
    for tc in candidates:
        ct, st = np.cos(ks * tc), np.sin(ks * tc)
        val = g0 + 2.0 * (gr @ ct - gi @ st)
        if val < best_v:
            best_t, best_v = float(tc % (2 * math.pi)), float(val)
    return best_t, best_v


def _tau_d1_d2(ks, gr, gi, t: float) -> tuple[float, float]:
    """First and second derivative of tau at a scalar t, one trig evaluation."""
    ct, st = np.cos(ks * t), np.sin(ks * t)
    d1 = -2.0 * (ks * (gr * st + gi * ct)).sum()
    d2 = -2.0 * (ks * ks * (gr * ct - gi * st)).sum()
    return float(d1), float(d2)


def _polish_minimum(ks, gr, gi, t0: float, h: float) -> float:
    t = t0
    for _ in range(40):
        d1, d2 = _tau_d1_d2(ks, gr, gi, t)
        if d2 <= 0:
            break
        step = d1 / d2
        if not math.isfinite(step) or abs(step) > h:
            break
        t -= step
        if abs(step) < 1e-15:
            return t
    # fall back to sign bisection of tau' on the bracket
    a, b = t0 - h, t0 + h
    da, _ = _tau_d1_d2(ks, gr, gi, a)
    db, _ = _tau_d1_d2(ks, gr, gi, b)
    if da < 0 < db:
        for _ in range(60):
            m = 0.5 * (a + b)
            dm, _ = _tau_d1_d2(ks, gr, gi, m)
            if dm < 0:
                a = m
            else:
                b = m
        return 0.5 * (a + b)
    return t


# ---------------------------------------------------------------------------
# exact nonnegativity certificate for rational vectors
# ---------------------------------------------------------------------------
# Real-coefficient polynomial helpers on Fraction lists (ascending powers).


def _rp_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _rp_deriv(p: list[Fraction]) -> list[Fraction]:
    return _rp_trim([p[k] * k for k in range(1, len(p))])


def _rp_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _rp_trim(out)


def _rp_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    db, lead = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        c = a[-1] / lead
        off = len(a) - 1 - db
        for j in range(db + 1):
            a[off + j] -= c * b[j]
        a = _rp_trim(a[:-1])  # leading entry cancelled exactly
    return _rp_trim(a)


def _rp_div(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    db, lead = len(b) - 1, b[-1]
    q = [Fraction(0)] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        c = a[-1] / lead
        q[len(a) - 1 - db] = c
        off = len(a) - 1 - db
        for j in range(db + 1):
            a[off + j] -= c * b[j]
        a = _rp_trim(a)
    return _rp_trim(q)


def _rp_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _rp_rem(a, b)
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def _rp_sign_at_inf(p: list[Fraction], positive_inf: bool) -> int:
    if not p:
        return 0
    s = 1 if p[-1] > 0 else -1
    if not positive_inf and (len(p) - 1) % 2 == 1:
        s = -s
    return s


def _sturm_count_all_real(p: list[Fraction]) -> int:
    """Number of distinct real roots of a square-free rational polynomial."""
    p = _rp_trim(list(p))
    if len(p) <= 1:
        return 0
    chain = [p, _rp_deriv(p)]
    while chain[-1]:
        nxt = [-c for c in _rp_rem(chain[-2], chain[-1])]
        chain.append(nxt)
    chain.pop()

    def variations(positive_inf: bool) -> int:
        signs = [s for q in chain if (s := _rp_sign_at_inf(q, positive_inf)) != 0]
        return sum(1 for x, y in zip(signs, signs[1:]) if x * y < 0)

    return variations(False) - variations(True)


def _yun_real(p: list[Fraction]) -> list[tuple[list[Fraction], int]]:
    out = []
    g = _rp_gcd(p, _rp_deriv(p))
    c = _rp_div(p, g)
    d = [x - y for x, y in _pad(_rp_div(_rp_deriv(p), g), _rp_deriv(c))]
    d = _rp_trim(d)
    i = 1
    while len(c) > 1:
        f = _rp_gcd(c, d) if d else [x / c[-1] for x in c]
        if len(f) > 1:
            out.append((f, i))
        c = _rp_div(c, f)
        d = _rp_trim([x - y for x, y in _pad(_rp_div(d, f) if d else [], _rp_deriv(c))])
        i += 1
    return out


def _pad(a: list[Fraction], b: list[Fraction]):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return zip(a, b)


def _cayley_numerator(v: CoefVector) -> list[Fraction]:
    """P with tau(2 arctan x) = P(x) / (1+x^2)^d, exact in the rationals."""
    alpha = [Fraction(a) for a in v.alpha]
    beta = [Fraction(b) for b in v.beta]
    one_px2 = [Fraction(1), Fraction(0), Fraction(1)]
    # (1+ix)^(2k) = re_k(x) + i im_k(x), computed by repeated multiplication
    pows = [([Fraction(1)], [])]  # k = 0
    re_c, im_c = [Fraction(1)], [Fraction(0)]
    for _ in range(2 * v.d):
        # multiply (re + i im) by (1 + i x)
        new_re = [x - y for x, y in _pad(re_c, [Fraction(0)] + im_c)]
        new_im = [x + y for x, y in _pad(im_c, [Fraction(0)] + re_c)]
        re_c, im_c = _rp_trim(new_re), _rp_trim(new_im)
        pows.append((re_c, im_c))
    acc = [Fraction(2) * alpha[0]]
    weight = [Fraction(1)]
    for _ in range(v.d):
        weight = _rp_mul(weight, one_px2)
    acc = _rp_mul(acc, weight)
    for k in range(1, v.d + 1):
        re_k, im_k = pows[2 * k]
        term = [2 * alpha[k] * c for c in re_k]
        term = _rp_trim([x - y for x, y in _pad(term, [2 * beta[k - 1] * c for c in im_k])])
        w = [Fraction(1)]
        for _ in range(v.d - k):
            w = _rp_mul(w, one_px2)
        acc = _rp_trim([x + y for x, y in _pad(acc, _rp_mul(term, w))])
    return _rp_trim(acc)


def certify_nonneg_exact(v: CoefVector) -> tuple[bool, bool]:
    """Exact (nonnegative?, touches zero?) for a rational coefficient vector.

    tau >= 0 on the circle iff its Cayley numerator P has a positive leading
    coefficient, an even degree deficit 2d - deg P, and no real root of odd
    multiplicity; tau touches zero iff P has any real root or a positive
    degree deficit.
    """
    if not v.is_exact:
        raise ValueError("exact certification needs rational entries")
    P = _cayley_numerator(v)
    if not P:
        return True, True  # tau is identically zero
    if P[-1] < 0:
        return False, False
    deficit = 2 * v.d - (len(P) - 1)
    if deficit % 2 == 1:
        return False, False
    touches = deficit > 0
    for factor, mult in _yun_real(P):
        nroots = _sturm_count_all_real(factor)
        if nroots > 0:
            if mult % 2 == 1:
                return False, False
            touches = True
    return True, touches


# ---------------------------------------------------------------------------
# Gram certificates
# ---------------------------------------------------------------------------


def gram_diag_sums(Q: np.ndarray) -> np.ndarray:
    n = Q.shape[0]
    return np.array([np.trace(Q, offset=-k) for k in range(n)], dtype=complex)


def _gram_from_factor(q: np.ndarray, n: int) -> np.ndarray:
    qq = np.zeros(n, dtype=complex)
    qq[: len(q)] = q
    return np.outer(qq, qq.conj())


def _spread_deficit(Q: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """Distribute per-diagonal gamma deficits evenly along each diagonal."""
    n = Q.shape[0]
    out = Q.astype(complex).copy()
    cur = gram_diag_sums(out)
    for k in range(len(gamma)):
        if k >= n:
            break
        deficit = gamma[k] - cur[k]
        cnt = n - k
        if k == 0:
            out[np.arange(n), np.arange(n)] += (deficit.real / cnt)
        else:
            idx = np.arange(n - k)
            out[idx + k, idx] += deficit / cnt
            out[idx, idx + k] += np.conj(deficit) / cnt
    return out


def _fejer_riesz_gram(v: CoefVector) -> np.ndarray | None:
    """Rank-one Gram matrix via spectral factorization of tau, or None."""
    gamma = v.gamma()
    n = v.d + 1
    scale = float(np.max(np.abs(gamma)))
    if scale == 0:
        return np.zeros((n, n), dtype=complex)
    deff = v.d
    while deff > 0 and abs(gamma[deff]) <= 1e-13 * scale:
        deff -= 1
    if deff == 0:
        if gamma[0].real < -1e-12 * scale:
            return None
        Q = np.zeros((n, n), dtype=complex)
        Q[0, 0] = max(gamma[0].real, 0.0)
        return Q
    # z^deff * tau(z) has the conjugate-reflected coefficient list
    laurent = np.concatenate([np.conj(gamma[1 : deff + 1][::-1]), gamma[: deff + 1]])
    roots = np.roots(laurent[::-1])
    for band in (1e-7, 1e-5, 1e-3):
        sel = _select_half_roots(roots, band)
        if sel is None:
            continue
        q = np.array([1.0 + 0j])
        for r in sel:
            q = np.convolve(q, np.array([-r, 1.0]))
        # scale so the autocorrelation matches gamma
        auto = np.array(
            [np.dot(q[k:], np.conj(q[: len(q) - k])) for k in range(len(q))]
        )
        k_star = int(np.argmax(np.abs(auto)))
        if abs(auto[k_star]) == 0:
            continue
        sigma = (gamma[k_star] / auto[k_star]).real
        if sigma <= 0:
            continue
        Q = _gram_from_factor(math.sqrt(sigma) * q, n)
        Q = _spread_deficit(Q, gamma)
        if _gram_ok(Q, gamma):
            return Q
    return None


def _select_half_roots(roots: np.ndarray, band: float) -> list[complex] | None:
    inside = [complex(r) for r in roots if abs(r) < 1.0 - band]
    on_circle = [complex(r) for r in roots if abs(abs(r) - 1.0) <= band]
    outside = [complex(r) for r in roots if abs(r) > 1.0 + band]
    if len(inside) != len(outside):
        return None
    chosen = list(inside)
    used = [False] * len(on_circle)
    for i, r in enumerate(on_circle):
        if used[i]:
            continue
        group = [i]
        used[i] = True
        for j in range(i + 1, len(on_circle)):
            if not used[j] and abs(on_circle[j] - r) <= max(10 * band, 1e-6):
                group.append(j)
                used[j] = True
        if len(group) % 2 == 1:
            return None
        centroid = np.mean([on_circle[j] for j in group])
        centroid = centroid / abs(centroid)
        chosen.extend([complex(centroid)] * (len(group) // 2))
    return chosen


def _gram_ok(Q: np.ndarray, gamma: np.ndarray, tol: float = 1e-8) -> bool:
    resid = float(np.max(np.abs(gram_diag_sums(Q)[: len(gamma)] - gamma)))
    if resid > tol:
        return False
    eigs = np.linalg.eigvalsh(Q)
    return bool(eigs[0] >= -tol)


def _gram_by_projection(gamma: np.ndarray, n: int, iters: int = 5000) -> np.ndarray | None:
    Q = np.zeros((n, n), dtype=complex)
    Q = _spread_deficit(Q, gamma)
    for _ in range(iters):
        w, V = np.linalg.eigh(Q)
        Q = (V * np.clip(w, 0.0, None)) @ V.conj().T
        Q = _spread_deficit(Q, gamma)
        if _gram_ok(Q, gamma, tol=1e-9):
            w, V = np.linalg.eigh(Q)
            return (V * np.clip(w, 0.0, None)) @ V.conj().T
    return Q if _gram_ok(Q, gamma) else None


@dataclasses.dataclass(frozen=True)
class PlusCertificate:
    is_plus: bool
    boundary: bool
    min_location: float
    min_value: float
    gram: np.ndarray | None
    gram_residual: float | None
    negative_point: float | None
    exact: bool


def is_plus(v: CoefVector, tol: float = 1e-9) -> PlusCertificate:
    """Decide membership in the plus cone, with a constructive witness.

    Rational vectors are decided exactly.  Float vectors are decided by the
    global minimum: min tau >= tol is plus, min tau <= -tol is not, and the
    band in between is reported as plus with the boundary flag set.
    """
    t_min, val = min_on_circle(v)
    if v.is_exact:
        verdict, touches = certify_nonneg_exact(v)
        boundary = touches
    else:
        verdict = val > -tol
        boundary = abs(val) < tol or (verdict and val <= tol)
    if not verdict:
        return PlusCertificate(
            False, False, t_min, val, None, None, t_min, v.is_exact
        )
    gamma = v.gamma()
    shift = 0.0
    if val <= tol:
        # touching (or dipping within the band): lift tau off the floor a hair
        # so spectral factorization sees a genuinely nonnegative function
        shift = max(0.0, -val) + 1e-13 * max(v.scale(), 1.0)
        gamma = gamma.copy()
        gamma[0] += shift
    Q = _fejer_riesz_gram(
        v if not shift else CoefVector.from_array(
            np.concatenate([[float(gamma[0].real) / 2.0], gamma[1:].real, gamma[1:].imag])
        )
    )
    if Q is None:
        Q = _gram_by_projection(gamma, v.d + 1)
    resid = None
    if Q is not None:
        resid = float(np.max(np.abs(gram_diag_sums(Q)[: len(v.gamma())] - v.gamma())))
    return PlusCertificate(True, boundary, t_min, val, Q, resid, None, v.is_exact)


# ---------------------------------------------------------------------------
# affine slices of the PSD-representable cone
# ---------------------------------------------------------------------------


class _HermitianSpace:
    """Real vectorization of n x n Hermitian matrices and the trace map.

    vec(Q) = [diag; sqrt2 Re(lower); sqrt2 Im(lower)] is an isometry for the
    Frobenius norm; ``phi`` maps vec(Q) to the coefficient vector x with
    x = (alpha_0..alpha_d, beta_1..beta_d) of tau_Q.
    """

    _cache: dict[int, "_HermitianSpace"] = {}

    def __new__(cls, n: int):
        if n in cls._cache:
            return cls._cache[n]
        self = super().__new__(cls)
        self.n = n
        ti, tj = np.tril_indices(n, -1)
        self.tri_i, self.tri_j = ti, tj
        m = len(ti)
        self.dim = n + 2 * m
        d = n - 1
        phi = np.zeros((2 * d + 1, self.dim))
        phi[0, :n] = 0.5
        for k in range(1, d + 1):
            mask = (ti - tj) == k
            cols = n + np.flatnonzero(mask)
            phi[k, cols] = 1.0 / math.sqrt(2.0)
            phi[d + k, cols + m] = 1.0 / math.sqrt(2.0)
        self.phi = phi
        cls._cache[n] = self
        return self

    def vec(self, Q: np.ndarray) -> np.ndarray:
        out = np.empty(self.dim)
        n = self.n
        out[:n] = np.diag(Q).real
        lower = Q[self.tri_i, self.tri_j]
        m = len(self.tri_i)
        out[n : n + m] = math.sqrt(2.0) * lower.real
        out[n + m :] = math.sqrt(2.0) * lower.imag
        return out

    def unvec(self, v: np.ndarray) -> np.ndarray:
        n = self.n
        m = len(self.tri_i)
        Q = np.zeros((n, n), dtype=complex)
        Q[np.arange(n), np.arange(n)] = v[:n]
        lower = (v[n : n + m] + 1j * v[n + m :]) / math.sqrt(2.0)
        Q[self.tri_i, self.tri_j] = lower
        Q[self.tri_j, self.tri_i] = lower.conj()
        return Q

    def project_psd(self, v: np.ndarray) -> np.ndarray:
        Q = self.unvec(v)
        w, V = np.linalg.eigh(Q)
        Q = (V * np.clip(w, 0.0, None)) @ V.conj().T
        return self.vec(Q)


def _orthonormal_rows(rows: np.ndarray, tol: float = 1e-10, floor: float = 0.0) -> np.ndarray:
    """Orthonormal basis of the row space, dropping directions with tiny weight.

    ``floor`` sets an absolute singular-value scale: pass 1.0 when the rows
    are residuals of unit vectors, so that pure cancellation noise is not
    mistaken for a direction.
    """
    if rows.size == 0:
        return rows.reshape(0, rows.shape[-1] if rows.ndim == 2 else 0)
    _, s, vh = np.linalg.svd(rows, full_matrices=False)
    cutoff = tol * max(s[0] if len(s) else 0.0, floor)
    keep = s > cutoff
    return vh[: int(np.count_nonzero(keep))]


def _complement_rows(sub: np.ndarray, ambient_dim: int) -> np.ndarray:
    if sub.shape[0] == 0:
        return np.eye(ambient_dim)
    _, s, vh = np.linalg.svd(sub, full_matrices=True)
    rank = int(np.count_nonzero(s > 1e-10 * s[0]))
    return vh[rank:]


def find_plus_in_slice(
    basis: np.ndarray,
    slice_constraint: tuple[np.ndarray, float],
    *,
    tol_feasible: float = 1e-9,
    iteration_cap: int = 20000,
    plateau_window: int = 500,
    plateau_level: float = 1e-7,
    recert_tol: float = 1e-7,
) -> CoefVector | None:
    """Plus vector v in span(basis) with <v, w> = target, or None.

    Alternating projections between the PSD cone and the affine set of Gram
    matrices whose coefficient vector lies in the slice.  ``None`` means the
    residual plateaued above ``plateau_level`` for ``plateau_window``
    iterations (certified-infeasible in the sense of this solver); a run that
    neither converges nor plateaus within ``iteration_cap`` iterations raises
    :class:`SolverStalled`.
    """
    w, target = slice_constraint
    w = np.asarray(w, dtype=float)
    nx = len(w)
    d = (nx - 1) // 2
    VB = _orthonormal_rows(np.asarray(basis, dtype=float).reshape(-1, nx))
    w_in = VB.T @ (VB @ w)
    if np.linalg.norm(w_in) <= 1e-12 * max(1.0, np.linalg.norm(w)):
        return None
    space = _HermitianSpace(d + 1)
    comp = _complement_rows(VB, nx)
    C = np.vstack([comp @ space.phi, (w @ space.phi)[None, :]])
    f = np.zeros(C.shape[0])
    f[-1] = target
    pinvC = np.linalg.pinv(C, rcond=1e-12)

    def proj_affine(vv: np.ndarray) -> np.ndarray:
        return vv - pinvC @ (C @ vv - f)

    v = proj_affine(space.vec(np.eye(d + 1, dtype=complex)))
    history: list[float] = []
    recerts = 0
    for _ in range(iteration_cap):
        vp = space.project_psd(v)
        va = proj_affine(vp)
        dist = float(np.linalg.norm(va - vp))
        history.append(dist)
        if dist <= tol_feasible * (1.0 + float(np.linalg.norm(va))):
            x = space.phi @ va
            cand = CoefVector.from_array(x, d=d)
            cert = is_plus(cand, tol=recert_tol)
            if cert.is_plus:
                return cand
            recerts += 1
            if recerts > 50:
                raise SolverStalled(
                    "converged iterates keep failing plus re-certification"
                )
        if len(history) > plateau_window:
            old = history[-plateau_window - 1]
            if dist > plateau_level and old - dist <= 0.01 * old:
                return None
        v = va
    raise SolverStalled(
        f"no convergence or plateau within {iteration_cap} iterations "
        f"(last residual {history[-1]:.3e})"
    )


# ---------------------------------------------------------------------------
# trace dimension on the cone
# ---------------------------------------------------------------------------


def plus_dimension(
    basis,
    seed: CoefVector | None = None,
) -> tuple[int, list[CoefVector]]:
    """Dimension of span(plus vectors in span(basis)), with realizing vectors.

    Phase 1 grows the span greedily: for each direction w of an orthonormal
    complement basis (in index order, + target before -), probe the slice
    {v in V : <v, w> = +-1} for a plus vector; every hit enlarges the span
    and the complement is rebuilt.  When V is the full coefficient space the
    shifted Fejer kernels realize the answer directly and no probing is
    needed.

    Phase 2 certifies completeness: with x the sum of the (normalized) found
    vectors, every plus vector of V must vanish at each circle zero of tau_x
    to at least its (even) order, so the span of the found vectors must equal
    the subspace W of V cut out by those vanishing conditions.  Disagreement
    raises :class:`FacialMismatch`; nothing is silently repaired.
    """
    rows = _coerce_rows(basis)
    nx = rows.shape[1]
    d = (nx - 1) // 2
    VB = _orthonormal_rows(rows)
    r = VB.shape[0]
    if r == 0:
        return 0, []
    if r == nx:
        vecs = [fejer_vector(d, shift=2 * math.pi * j / (2 * d + 1)) for j in range(nx)]
        return nx, vecs

    found: list[CoefVector] = []
    if seed is not None:
        arr = seed.as_array()
        resid = arr - VB.T @ (VB @ arr)
        if np.linalg.norm(resid) > 1e-8 * max(1.0, np.linalg.norm(arr)):
            raise ValueError("seed does not lie in the given subspace")
        if not is_plus(seed).is_plus:
            raise ValueError("seed is not a plus vector")
        found.append(seed)

    while True:
        S = _orthonormal_rows(np.array([v.as_array() for v in found])) if found else np.zeros((0, nx))
        proj = VB - (VB @ S.T) @ S if S.shape[0] else VB
        comp = _orthonormal_rows(proj, floor=1.0)
        if comp.shape[0] == 0:
            break
        hit = None
        for w in comp:
            for target in (1.0, -1.0):
                cand = find_plus_in_slice(VB, (w, target))
                if cand is not None:
                    hit = cand
                    break
            if hit is not None:
                break
        if hit is None:
            break
        found.append(hit)

    if not found:
        return 0, []

    W = _facial_span(found, VB)
    dim_w = W.shape[0]
    if dim_w != len(found):
        raise FacialMismatch(
            f"greedy search found {len(found)} plus vectors but the facial "
            f"certificate spans dimension {dim_w}",
            diagnostics={"found": len(found), "facial_dim": dim_w},
        )
    for v in found:
        arr = v.as_array()
        resid = arr - W.T @ (W @ arr)
        if np.linalg.norm(resid) > 1e-6 * max(1.0, np.linalg.norm(arr)):
            raise FacialMismatch(
                "a found plus vector falls outside the facial certificate span",
                diagnostics={"residual": float(np.linalg.norm(resid))},
            )
    return dim_w, found


def _coerce_rows(basis) -> np.ndarray:
    rows = []
    for b in basis:
        rows.append(b.as_array() if isinstance(b, CoefVector) else np.asarray(b, dtype=float))
    return np.array(rows, dtype=float)


def _facial_span(found: list[CoefVector], VB: np.ndarray) -> np.ndarray:
    """Orthonormal basis of {y in V : tau_y vanishes at the zeros of tau_x}."""
    nx = VB.shape[1]
    d = (nx - 1) // 2
    xs = np.zeros(nx)
    for v in found:
        arr = v.as_array()
        xs = xs + arr / np.linalg.norm(arr)
    x_hat = CoefVector.from_array(xs, d=d)
    zeros = _circle_zeros_of_tau(x_hat)
    if not zeros:
        return VB
    basis_vecs = [CoefVector.from_array(VB[i], d=d) for i in range(VB.shape[0])]
    rows = []
    for t0, order in zeros:
        for k in range(order):
            row = [
                float(b.tau(t0)) if k == 0 else float(b.tau_derivative(t0, k))
                for b in basis_vecs
            ]
            rows.append(row)
    A = np.array(rows, dtype=float)
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    smax = s[0] if len(s) else 0.0
    rank = int(np.count_nonzero(s > 1e-8 * max(smax, 1.0)))
    null_coords = vh[rank:]
    return _orthonormal_rows(null_coords @ VB)


def _circle_zeros_of_tau(v: CoefVector) -> list[tuple[float, int]]:
    """Zeros of a nonnegative tau with their (even) vanishing orders."""
    g = v.gamma()
    scale = float(np.sum(np.abs(g)))
    n = max(64 * v.d + 256, 512)
    t = 2 * math.pi * np.arange(n) / n
    vals = v.tau(t)
    zero_tol = 1e-8 * max(scale, 1e-30)
    h = 2 * math.pi / n
    ks = np.arange(1, v.d + 1, dtype=float)
    gr = g[1:].real.astype(float)
    gi = g[1:].imag.astype(float)
    raw = []
    for i in range(n):
        if vals[i] <= vals[(i - 1) % n] and vals[i] <= vals[(i + 1) % n] and vals[i] <= zero_tol:
            raw.append(_polish_minimum(ks, gr, gi, t[i], h))
    zeros: list[float] = []
    for t0 in sorted(x % (2 * math.pi) for x in raw):
        if zeros and min(abs(t0 - zeros[-1]), 2 * math.pi - abs(t0 - zeros[-1])) < 1e-6:
            continue
        if zeros and min(abs(t0 - zeros[0]), 2 * math.pi - abs(t0 - zeros[0])) < 1e-6:
            continue
        zeros.append(t0)
    out = []
    for t0 in zeros:
        order = None
        for k in range(1, 2 * v.d + 1):
            bound = 2.0 * float(np.sum(np.abs(g[1:]) * (np.arange(1, v.d + 1) ** k)))
            if abs(float(v.tau_derivative(t0, k))) > 1e-6 * max(bound, 1e-30):
                order = k
                break
        if order is None or order % 2 == 1:
            raise FacialMismatch(
                "could not determine an even vanishing order at a circle zero",
                diagnostics={"t0": t0, "order": order},
            )
        out.append((t0, order))
    return out
