"""Dense eigen- and null-space kernels for small matrices."""

import math
from typing import Optional, Tuple

import numpy as np

from .config import (
    JACOBI_MAX_SWEEPS,
    JACOBI_OFF_TOL,
    QR_MAX_ITER_PER_EIGENVALUE,
    RANK_TOL,
    RESIDUAL_TOL,
    SPD_MIN_EIGENVALUE,
    SYMMETRY_TOL,
)
from .exceptions import DimensionError, DomainError, NumericalFailure
from .models import OrthonormalBasis, Spectrum
from .utils import logger

_EPS = np.finfo(float).eps


def scale_of(a: np.ndarray) -> float:
    """Tolerance scale ``max(1, ||a||_F)``."""
    return max(1.0, float(np.linalg.norm(a)))


def _check_square(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"Expected a square matrix, got shape {a.shape}")


def real_symmetric(a) -> np.ndarray:
    """Validate near-symmetry of a real matrix and return its symmetric part."""
    a = np.array(a, dtype=float)
    _check_square(a)
    if not np.all(np.isfinite(a)):
        raise DomainError("Matrix has non-finite entries")
    asym = float(np.max(np.abs(a - a.T), initial=0.0))
    if asym > SYMMETRY_TOL * scale_of(a):
        raise DomainError(f"Matrix is not symmetric (max |a_ij - a_ji| = {asym:.3e})")
    return 0.5 * (a + a.T)


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """One Jacobi rotation in the (p, q) plane, annihilating ``a[p, q]``."""
    theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
    t = (1.0 if theta >= 0.0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c

    col_p, col_q = a[:, p].copy(), a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    row_p, row_q = a[p, :].copy(), a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q
    a[p, q] = a[q, p] = 0.0

    col_p, col_q = v[:, p].copy(), v[:, q].copy()
    v[:, p] = c * col_p - s * col_q
    v[:, q] = s * col_p + c * col_q


def sym_eig(a) -> Tuple[np.ndarray, OrthonormalBasis]:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi sweeps.

    Returns:
        Ascending eigenvalues and the matching orthonormal eigenvectors
        (as the columns of the basis).

    Raises:
        NumericalFailure: off-diagonal mass still above threshold after the
            sweep cap.
    """
    a = real_symmetric(a).copy()
    n = a.shape[0]
    v = np.eye(n)
    threshold = JACOBI_OFF_TOL * scale_of(a)

    for sweep in range(JACOBI_MAX_SWEEPS + 1):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= threshold:
            break
        if sweep == JACOBI_MAX_SWEEPS:
            raise NumericalFailure(
                f"Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps (off-diagonal norm {off:.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0.0:
                    continue
                if abs(a[p, q]) <= _EPS * 1e-2 * max(abs(a[p, p]), abs(a[q, q])):
                    # below the rounding of the diagonal
                    a[p, q] = a[q, p] = 0.0
                    continue
                _rotate(a, v, p, q)

    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], OrthonormalBasis(v[:, order])


def spd_power(a, sigma: float) -> np.ndarray:
    """``a**sigma`` for a symmetric positive definite matrix."""
    a = real_symmetric(a)
    eigenvalues, basis = sym_eig(a)
    smallest = float(eigenvalues[0]) if len(eigenvalues) else 1.0
    if smallest <= SPD_MIN_EIGENVALUE * scale_of(a):
        raise DomainError(f"Matrix is not positive definite (min eigenvalue {smallest:.6e})")
    v = basis.vectors
    s = (v * eigenvalues ** sigma) @ v.T
    return 0.5 * (s + s.T)


def spd_inv_sqrt(a) -> np.ndarray:
    return spd_power(a, -0.5)


def hessenberg(a) -> np.ndarray:
    """Unitary similarity to upper Hessenberg form by Householder reflections."""
    h = np.array(a, dtype=complex)
    _check_square(h)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        if np.linalg.norm(x[1:]) == 0.0:
            continue
        alpha = np.linalg.norm(x)
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        u = x
        u[0] += phase * alpha
        u /= np.linalg.norm(u)
        h[k + 1:, k:] -= 2.0 * np.outer(u, u.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ u, u.conj())
        h[k + 2:, k] = 0.0
    return h


def _wilkinson_shift(w: np.ndarray) -> complex:
    a, b, c, d = w[-2, -2], w[-2, -1], w[-1, -2], w[-1, -1]
    half_trace = 0.5 * (a + d)
    root = np.sqrt(0.25 * (a - d) ** 2 + b * c)
    mu1, mu2 = half_trace + root, half_trace - root
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def _qr_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Eigenvalues of a complex matrix by shifted QR on its Hessenberg form."""
    h = hessenberg(a)
    n = h.shape[0]
    floor = _EPS * scale_of(h)
    eigenvalues = np.zeros(n, dtype=complex)

    hi = n - 1
    iterations = 0
    while hi >= 0:
        lo = hi
        while lo > 0:
            sub = abs(h[lo, lo - 1])
            if sub <= _EPS * (abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])) or sub <= floor:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1

        if lo == hi:
            eigenvalues[hi] = h[hi, hi]
            hi -= 1
            iterations = 0
            continue

        iterations += 1
        if iterations > QR_MAX_ITER_PER_EIGENVALUE:
            raise NumericalFailure(f"QR iteration did not converge for eigenvalue {hi + 1} of {n}")

        window = h[lo:hi + 1, lo:hi + 1]
        if iterations % 10 == 0:
            # exceptional shift
            mu = window[-1, -1] + 0.75 * abs(window[-1, -2])
        else:
            mu = _wilkinson_shift(window)
        eye = np.eye(window.shape[0])
        q_factor, r_factor = np.linalg.qr(window - mu * eye)
        h[lo:hi + 1, lo:hi + 1] = np.triu(r_factor @ q_factor + mu * eye, -1)

    return eigenvalues


def eigenvector(a, eigenvalue: complex, iterations: int = 3) -> np.ndarray:
    """Unit eigenvector for a computed eigenvalue by inverse iteration."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    offset = 1e-10 * scale_of(a)
    v = np.exp(1j * np.arange(1, n + 1)) / np.sqrt(n)
    for attempt in range(1, 4):
        shifted = a - (eigenvalue + offset * attempt) * np.eye(n)
        try:
            for _ in range(iterations):
                w = np.linalg.solve(shifted, v)
                v = w / np.linalg.norm(w)
            return v
        except np.linalg.LinAlgError:
            continue
    raise NumericalFailure(f"Inverse iteration failed at eigenvalue {eigenvalue}")


def order_eigenvalues(values, zero_tol: float) -> np.ndarray:
    """Permutation sorting eigenvalues by (Re, |Im|, Im).

    Re and |Im| are bucketed at ``zero_tol`` so numerically equal keys tie.
    """
    values = np.asarray(values, dtype=complex)
    re = np.where(np.abs(values.real) < zero_tol, 0.0, np.round(values.real / zero_tol))
    abs_im = np.round(np.abs(values.imag) / zero_tol)
    return np.lexsort((values.imag, abs_im, re))


def make_spectrum(values, zero_tol: float, residuals: Optional[np.ndarray] = None) -> Spectrum:
    """Order eigenvalues and classify real parts inside the tolerance band as zero."""
    values = np.asarray(values, dtype=complex)
    order = order_eigenvalues(values, zero_tol)
    raw = values[order]
    re = np.where(np.abs(raw.real) < zero_tol, 0.0, raw.real)
    classified = re + 1j * raw.imag
    ordered_residuals = None if residuals is None else np.asarray(residuals)[order]
    return Spectrum(values=classified, raw=raw, zero_tol=zero_tol, residuals=ordered_residuals)


def complex_eigenvalues(a, zero_tol: Optional[float] = None) -> Spectrum:
    """All eigenvalues of a square complex matrix, ordered and residual-checked.

    Args:
        a: square matrix with finite entries.
        zero_tol: band for ordering ties and zero classification; defaults to
            ``1e-10 * scale``.
    """
    a = np.array(a, dtype=complex)
    _check_square(a)
    if not np.all(np.isfinite(a)):
        raise DomainError("Matrix has non-finite entries")
    scale = scale_of(a)
    if zero_tol is None:
        zero_tol = RANK_TOL * scale

    values = _qr_eigenvalues(a)
    residuals = np.array([
        np.linalg.norm(a @ v - lam * v)
        for lam, v in ((lam, eigenvector(a, lam)) for lam in values)
    ])
    worst = float(np.max(residuals, initial=0.0))
    if worst > RESIDUAL_TOL * scale:
        logger.warning(f"Eigenpair residual {worst:.3e} exceeds tolerance {RESIDUAL_TOL * scale:.3e}")
    return make_spectrum(values, zero_tol, residuals)


def embedded_real_parts(a) -> np.ndarray:
    """Ascending real parts of the spectrum of ``a`` from the real embedding ``[[Re, -Im], [Im, Re]]``.

    The embedding spectrum is that of ``a`` together with its conjugates, so each
    real part occurs twice and every other sorted entry belongs to ``a``.
    """
    a = np.asarray(a, dtype=complex)
    _check_square(a)
    embedding = np.block([[a.real, -a.imag], [a.imag, a.real]])
    real_parts = np.sort(np.linalg.eigvals(embedding).real)
    return real_parts[::2]


def null_space(a, tol: float = RANK_TOL) -> OrthonormalBasis:
    """Orthonormal basis of the numerical null space of a (possibly rectangular) matrix."""
    a = np.atleast_2d(np.asarray(a))
    n = a.shape[1]
    if a.shape[0] == 0:
        return OrthonormalBasis(np.eye(n, dtype=a.dtype))
    _, singular_values, vh = np.linalg.svd(a, full_matrices=True)
    rank = int(np.sum(singular_values > tol * scale_of(a)))
    return OrthonormalBasis(vh[rank:].conj().T)


def orthonormalize(vectors: np.ndarray, tol: float = RANK_TOL) -> OrthonormalBasis:
    """Orthonormal basis of the column span of ``vectors``."""
    vectors = np.atleast_2d(vectors)
    if vectors.shape[1] == 0:
        return OrthonormalBasis(vectors)
    u, singular_values, _ = np.linalg.svd(vectors, full_matrices=False)
    rank = int(np.sum(singular_values > tol * max(1.0, float(singular_values[0]))))
    return OrthonormalBasis(u[:, :rank])


def intersect_subspaces(first: OrthonormalBasis, second: OrthonormalBasis,
                        tol: float = RANK_TOL) -> OrthonormalBasis:
    """Basis of ``span(first) ∩ span(second)`` via the stacked projector complements."""
    if first.q != second.q:
        raise DimensionError(f"Subspaces live in different dimensions: {first.q} != {second.q}")
    eye = np.eye(first.q)
    stacked = np.vstack([eye - first.projector(), eye - second.projector()])
    return null_space(stacked, tol)
