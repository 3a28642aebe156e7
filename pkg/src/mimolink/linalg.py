"""Complex QR decomposition with the positive-real-diagonal convention.

The tree-search detector needs the thin QR factorization H = QR where R is
upper triangular with real, strictly positive diagonal entries.  With that
convention the factorization of a full-column-rank matrix is unique, which
keeps every downstream metric deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RANK_TOL = 1e-12


class SingularMatrixError(ValueError):
    """Matrix is rank deficient to working precision."""


@dataclass(frozen=True)
class QrFactors:
    """Thin QR factors of a channel matrix.

    ``q`` has orthonormal columns, ``r`` is upper triangular with a real,
    strictly positive diagonal.  ``y_rot`` carries the rotated receive
    vector ``q^H y`` once attached; it is None straight out of
    :func:`qr_decompose`.
    """

    q: np.ndarray
    r: np.ndarray
    y_rot: np.ndarray | None = None


def qr_decompose(h: np.ndarray) -> QrFactors:
    """Thin QR of ``h`` (rows >= cols) with real positive diag(r).

    Raises:
        ValueError: if ``h`` is not 2-D or has fewer rows than columns.
        SingularMatrixError: if a diagonal entry of R falls below
            ``RANK_TOL`` in magnitude (rank-deficient input).
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {h.ndim}")
    rows, cols = h.shape
    if rows < cols:
        raise ValueError(f"need rows >= cols, got shape {h.shape}")
    q, r = np.linalg.qr(h, mode="reduced")
    d = np.diagonal(r).copy()
    if np.any(np.abs(d) < RANK_TOL):
        raise SingularMatrixError(
            "rank-deficient matrix: |diag(R)| entry below %g" % RANK_TOL
        )
    # LAPACK leaves the diagonal phase arbitrary; rotate it onto the
    # positive real axis (columns of q pick up the conjugate phase).
    phase = d / np.abs(d)
    q = q * phase[np.newaxis, :]
    r = r * np.conj(phase)[:, np.newaxis]
    idx = np.arange(cols)
    r[idx, idx] = np.abs(d)
    return QrFactors(q=q, r=r)


def rotate_receive(factors: QrFactors, y: np.ndarray) -> np.ndarray:
    """Rotate a receive vector into the triangular frame: ``q^H y``."""
    y = np.asarray(y, dtype=np.complex128)
    if y.shape != (factors.q.shape[0],):
        raise ValueError(
            f"receive vector length {y.shape} does not match q rows {factors.q.shape[0]}"
        )
    return factors.q.conj().T @ y
