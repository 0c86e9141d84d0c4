"""Stationary distribution of a finite-state rate matrix.

Uses Grassmann-Taksar-Heyman (GTH) state reduction: a subtraction-free
variant of Gaussian elimination that works off the off-diagonal rates alone,
so it stays numerically stable even when rates differ by many orders of
magnitude.  No convergence tuning, no iteration counts.
"""
from __future__ import annotations

import numpy as np

__all__ = ["solve_stationary", "residual"]

_NEGATIVE_TOL = -1e-14


def solve_stationary(generator: np.ndarray) -> np.ndarray:
    """Solve ``pi @ Q = 0`` with ``sum(pi) == 1`` by GTH state reduction.

    Parameters
    ----------
    generator : (n, n) array_like
        Rate matrix of an irreducible chain: nonnegative off-diagonals,
        rows summing to zero.

    Returns
    -------
    (n,) ndarray
        Stationary probabilities in the generator's state order.

    Raises
    ------
    ValueError
        If the matrix is not square, if the reduction hits a row with no
        forward rate (reducible or absorbing chain), or if the result carries
        a negative entry beyond round-off -- both symptoms of a malformed
        generator.
    """
    a = np.array(generator, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"generator must be square, got shape {a.shape}")
    n = a.shape[0]
    if n == 1:
        return np.ones(1)

    # Forward reduction: fold state k into the remaining chain.  Only
    # off-diagonal mass is ever read, so no cancellation occurs.
    for k in range(n - 1):
        scale = np.sum(a[k, k + 1 :])
        if scale <= 0:
            raise ValueError(
                f"state {k} has no forward transition; chain is reducible or absorbing"
            )
        a[k + 1 :, k] /= scale
        a[k + 1 :, k + 1 :] += np.outer(a[k + 1 :, k], a[k, k + 1 :])

    # Back substitution, then normalize.
    x = np.zeros(n)
    x[n - 1] = 1.0
    for k in range(n - 2, -1, -1):
        x[k] = x[k + 1 :] @ a[k + 1 :, k]
    if np.min(x) < _NEGATIVE_TOL:
        raise ValueError(
            f"negative stationary mass {np.min(x):g}: generator is malformed"
        )
    np.clip(x, 0.0, None, out=x)
    return x / np.sum(x)


def residual(generator: np.ndarray, distribution: np.ndarray) -> float:
    """Max-norm of the balance defect ``pi @ Q``.

    Zero (to round-off) certifies ``distribution`` as stationary for
    ``generator``.
    """
    q = np.asarray(generator, dtype=float)
    pi = np.asarray(distribution, dtype=float)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ValueError(f"generator must be square, got shape {q.shape}")
    if pi.shape != (q.shape[0],):
        raise ValueError(
            f"distribution length {pi.shape} does not match generator order {q.shape[0]}"
        )
    return float(np.max(np.abs(pi @ q)))
