"""Height-constrained simple random walks: an exactly solvable benchmark.

The height of a simple random walk in the upper half-plane, killed when it
leaves ``0..h-2``, evolves by the symmetric tridiagonal kernel ``J_h`` with
``1/2`` on the diagonal (horizontal steps) and ``1/4`` off it. Powers of
``J_h`` are evaluated through its sine eigenbasis.

Large ``n`` is handled in the log domain: ``log lambda_j`` is formed as
``log1p(-sin^2(j pi / 2h))`` so that ``n log lambda_j`` keeps full relative
accuracy, and sums are rescaled by their largest term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

TAIL_REL = 1e-30


@dataclass(frozen=True)
class StripKernel:
    """Spectral data of ``J_h`` on heights ``0..h-2``."""

    h: int

    def __post_init__(self):
        if self.h < 2:
            raise ValueError(f"strip parameter h must be >= 2, got {self.h}")

    @property
    def size(self):
        return self.h - 1

    @property
    def j(self):
        return np.arange(1, self.h)

    @property
    def eigenvalues(self):
        return 0.5 + 0.5 * np.cos(self.j * np.pi / self.h)

    @property
    def log_eigenvalues(self):
        # 1/2 + 1/2 cos x = cos^2(x/2) = 1 - sin^2(x/2)
        return np.log1p(-np.sin(self.j * np.pi / (2 * self.h)) ** 2)

    @property
    def eigenvectors(self):
        """Columns ``v_j`` with components ``sin(j (k+1) pi / h)``."""
        k = np.arange(self.size)
        return np.sin(np.outer(k + 1, self.j) * np.pi / self.h)

    def matrix(self):
        m = self.size
        J = np.zeros((m, m))
        idx = np.arange(m)
        J[idx, idx] = 0.5
        J[idx[:-1], idx[:-1] + 1] = 0.25
        J[idx[1:], idx[1:] - 1] = 0.25
        return J

    def reconstruct(self):
        """``sum_j lambda_j v_j v_j^T / |v_j|^2``."""
        V = self.eigenvectors
        norms = (V ** 2).sum(axis=0)
        return (V * (self.eigenvalues / norms)) @ V.T


def _check_rows(h, *rows):
    for r in rows:
        if not isinstance(r, (int, np.integer)) or not 0 <= r <= h - 2:
            raise ValueError(f"height index {r!r} outside 0..{h - 2}")


def kernel_power(h, n, r, y):
    """``J_h^n(r, y)`` from the spectral sum."""
    K = StripKernel(h)
    _check_rows(h, r, y)
    if n < 0:
        raise ValueError("n must be >= 0")
    j = K.j
    lam_n = np.exp(n * K.log_eigenvalues) if n else np.ones(j.size)
    terms = lam_n * np.sin((r + 1) * j * np.pi / h) * np.sin((y + 1) * j * np.pi / h)
    return float(2.0 / h * terms.sum())


def kernel_power_iterative(h, n, r, y):
    """``J_h^n(r, y)`` by ``n`` tridiagonal vector updates (reference route)."""
    _check_rows(h, r, y)
    v = np.zeros(h - 1)
    v[r] = 1.0
    for _ in range(n):
        w = 0.5 * v
        w[1:] += 0.25 * v[:-1]
        w[:-1] += 0.25 * v[1:]
        v = w
    return float(v[y])


def log_survival(n, h):
    """``log F_n(h)`` evaluated stably for large ``n``."""
    K = StripKernel(h)
    if n < 0:
        raise ValueError("n must be >= 0")
    j = K.j
    # sum_y sin((y+1) j pi / h) for y = 0..h-2
    ys = np.arange(1, h)
    colsum = np.sin(np.outer(ys, j) * np.pi / h).sum(axis=0)
    w = 2.0 / h * np.sin(j * np.pi / h) * colsum
    e = n * K.log_eigenvalues
    top = e.max()
    s = float(np.sum(w * np.exp(e - top)))
    if s <= 0:
        # only possible when round-off swamps a vanishing sum (n = 0 gives 1)
        return -math.inf
    return top + math.log(s)


def survival_Fnh(n, h):
    """``F_n(h)``: probability an n-step walk stays in ``0 <= y <= h - 2``."""
    if h < 2:
        raise ValueError(f"h must be >= 2, got {h}")
    return math.exp(log_survival(n, h))


def rw_weighted(n, u, dps=30):
    """``<e^{-u h}>_n`` for half-plane simple random walks.

    Uses ``e^{2u} (1 - e^{-u}) sum_{h >= 2} e^{-u h} F_n(h)``, stopping once
    terms are past their peak and below ``1e-30`` of the running total.
    Returned as an mpmath float since the value underflows doubles for
    very large ``n``.
    """
    if u <= 0:
        raise ValueError("u must be > 0")
    if n < 0:
        raise ValueError("n must be >= 0")
    logs = []
    prev = -math.inf
    log_total = -math.inf
    h = 2
    while True:
        lt = -u * h + log_survival(n, h)
        logs.append(lt)
        log_total = np.logaddexp(log_total, lt)
        if lt < prev and lt - log_total < math.log(TAIL_REL):
            break
        prev = lt
        h += 1
    best = max(logs)
    s = float(np.sum(np.exp(np.array(logs) - best)))
    with mpmath.workdps(dps):
        pref = mpmath.exp(2 * mpmath.mpf(u)) * (1 - mpmath.exp(-mpmath.mpf(u)))
        return pref * mpmath.exp(mpmath.mpf(best)) * s


def rw_amplitudes(u):
    """``(A_u, lambda_u)`` of the closed-form asymptotics."""
    if u <= 0:
        raise ValueError("u must be > 0")
    u = mpmath.mpf(u)
    A = (mpmath.mpf(2) ** (mpmath.mpf(8) / 3) / mpmath.sqrt(3)
         * mpmath.pi ** (mpmath.mpf(1) / 6) * u ** (-mpmath.mpf(1) / 3)
         * mpmath.exp(u) * (mpmath.exp(u) - 1))
    lam = mpmath.mpf(2) ** (-mpmath.mpf(4) / 3) * 3 * mpmath.pi ** (mpmath.mpf(2) / 3) \
        * u ** (mpmath.mpf(2) / 3)
    return A, lam


def rw_asymptotic(n, u):
    """``A_u n^{-1/6} exp(-lambda_u n^{1/3})``."""
    A, lam = rw_amplitudes(u)
    n = mpmath.mpf(n)
    return A * n ** (-mpmath.mpf(1) / 6) * mpmath.exp(-lam * mpmath.cbrt(n))


def rw_table(ns, u):
    """Rows ``(n, exact, asymptotic, ratio)``."""
    out = []
    for n in ns:
        ex, asy = rw_weighted(n, u), rw_asymptotic(n, u)
        out.append((n, ex, asy, ex / asy))
    return out
