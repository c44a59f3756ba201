"""Non-negative least squares via the Lawson-Hanson active-set method.

Solves min ||a @ x - b||^2 subject to x >= 0.  Variables move between an
active set (clamped at zero) and a passive set solved by unconstrained
least squares; the loop is finite in exact arithmetic and stops here when
the Karush-Kuhn-Tucker residual falls below a relative tolerance.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError

__all__ = ["nnls"]


def nnls(a, b, tol_rel: float = 1e-10, max_iter: int | None = None) -> np.ndarray:
    """Solve ``min ||a@x - b||`` with ``x >= 0``.

    Parameters
    ----------
    a : (m, n) array_like
    b : (m,) array_like
    tol_rel : float
        Stop when every clamped variable's gradient is below
        ``tol_rel * max|a.T @ b|`` (relative KKT optimality).
    max_iter : int, optional
        Cap on least-squares subproblem solves; defaults to ``3 * n``.

    Returns
    -------
    np.ndarray
        The nonnegative minimizer.

    Raises
    ------
    ConvergenceError
        If the iteration cap is hit; carries the best iterate in ``best_x``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 1 or a.shape[0] != b.shape[0]:
        raise ValueError("need a (m, n) matrix and a length-m vector")
    m, n = a.shape
    if max_iter is None:
        max_iter = max(3 * n, 30)

    x = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    grad0 = a.T @ b
    tol = tol_rel * max(float(np.max(np.abs(grad0))), np.finfo(float).tiny)

    w = grad0.copy()  # gradient of -0.5||ax-b||^2 at x = 0
    solves = 0
    while True:
        free = ~passive
        if not np.any(free) or np.max(w[free]) <= tol:
            return x
        j = np.flatnonzero(free)[np.argmax(w[free])]
        passive[j] = True
        while True:
            cols = np.flatnonzero(passive)
            z = np.linalg.lstsq(a[:, cols], b, rcond=None)[0]
            solves += 1
            if solves > max_iter:
                raise ConvergenceError(
                    f"active-set NNLS hit the iteration cap ({max_iter} solves)",
                    best_x=x,
                )
            if np.all(z > 0.0):
                x = np.zeros(n)
                x[cols] = z
                break
            # Step to the first bound hit on the segment x -> z, then drop
            # every variable pinned at zero from the passive set.
            xp = x[cols]
            mask = z <= 0.0
            alpha = np.min(xp[mask] / (xp[mask] - z[mask]))
            xp = xp + alpha * (z - xp)
            xp[mask & (xp <= 0.0)] = 0.0
            x = np.zeros(n)
            x[cols] = np.maximum(xp, 0.0)
            passive[cols] = x[cols] > 0.0
        w = a.T @ (b - a @ x)
        w[passive] = 0.0  # solved exactly on the passive set
