"""Series analysis for stretched-exponential coefficient sequences.

The sequences analysed behave like

    a_n ~ const * e^{beta n} * mu_1^{n^sigma} * n^g

with ``e^beta`` known. Derived sequences (log-ratios, ``s_n``, ``t_n``,
local gradients) are formed in mpmath at the series' working precision and
only the final least-squares fits run in double precision.

Local estimates are extrapolated by a least-squares fit of the last ``K``
values against a correction term in ``n``, reporting the intercept. The
default term is ``1/n``. Estimators whose leading correction is known to be
slower (``n^{-sigma}``, or ``log(n) n^{-sigma}``) are extrapolated against
that term instead, since a ``1/n`` fit leaves a bias of several percent even
at ``n = 200``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .partition import CONSTANTS, DEFAULT_DPS, WeightedSeries, beta as beta_const

K_DEFAULT = 10
SIGMA = float(CONSTANTS.sigma)

METHODS = ("ratio_fit_2", "ratio_fit_3", "coeff_pairs", "coeff_triples",
           "logratio_solve", "logratio_solve_3", "s_n_gradient", "t_n_gradient",
           "direct_root")

# Gauss-Newton settings
GN_REL_STEP = 1e-6
GN_TOL = 1e-10
GN_MAX_ITER = 200


class AnalysisError(ValueError):
    """Not enough usable terms for the requested estimate."""


@dataclass(frozen=True)
class AsymptoticModel:
    """``a_n = const * e^{beta n} * mu_1^{n^sigma} * n^g``."""

    beta: float
    log_mu1: float
    sigma: float
    g: float
    const: float = 1.0

    def __post_init__(self):
        for name in ("beta", "log_mu1", "sigma", "g", "const"):
            if not math.isfinite(float(getattr(self, name))):
                raise ValueError(f"{name} must be finite")

    def log_value(self, n):
        n = mpmath.mpf(n)
        return (mpmath.log(mpmath.mpf(self.const)) + mpmath.mpf(self.beta) * n
                + n ** mpmath.mpf(self.sigma) * mpmath.mpf(self.log_mu1)
                + mpmath.mpf(self.g) * mpmath.log(n))

    def value(self, n):
        return mpmath.exp(self.log_value(n))


@dataclass(frozen=True)
class EstimateRecord:
    """Outcome of one estimation method on one series.

    A record that did not converge carries no estimates at all.
    """

    method: str
    u: float
    window: tuple
    estimates: dict = field(default_factory=dict)
    converged: bool = True
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.converged and self.estimates:
            raise ValueError("a non-converged record must not carry estimates")
        if self.converged and any(not math.isfinite(v) for v in self.estimates.values()):
            raise ValueError("estimates must be finite")

    @property
    def log_mu1(self):
        return self.estimates.get("log_mu1")

    def to_dict(self):
        return {"method": self.method, "u": self.u, "window": list(self.window),
                "converged": self.converged,
                "estimates": dict(self.estimates) if self.converged else "n.c.",
                "diagnostics": self.diagnostics}


# --------------------------------------------------------------------------
# helpers


def _beta(beta, dps):
    return beta_const(dps) if beta is None else mpmath.mpf(beta)


def _raw_logs(a: WeightedSeries):
    """``n -> log a_n`` for the un-normalized series, at the series precision."""
    raw = a.as_raw()
    with mpmath.workdps(a.dps):
        return {n: mpmath.log(v) for n, v in raw.values.items()}


def _consecutive(d, step=1):
    return [n for n in sorted(d) if n - step in d]


def _clip(seq, window):
    if window is None:
        return seq
    lo, hi = window
    return {n: v for n, v in seq.items() if lo <= n <= hi}


# correction terms an extrapolation may fit against, as functions of (n, sigma)
CORRECTIONS = {
    "1/n": (lambda n, s: 1.0 / n,),
    "n^-sigma": (lambda n, s: n ** -s,),
    "n^(sigma-1)": (lambda n, s: n ** (s - 1.0),),
    "log_n^-sigma": (lambda n, s: n ** -s, lambda n, s: math.log(n) * n ** -s),
}


def extrapolate(seq, K=K_DEFAULT, correction="1/n", sigma=SIGMA):
    """Limit of ``seq`` from a least-squares fit of its last ``K`` values.

    The fit is ``seq[n] = c_0 + sum_j c_j f_j(n)`` with the terms ``f_j``
    named by ``correction`` (see :data:`CORRECTIONS`). Returns
    ``(c_0, c_1, rms_residual)``.
    """
    terms = CORRECTIONS[correction]
    ns = sorted(seq)[-K:]
    if len(ns) < len(terms) + 2:
        raise AnalysisError(f"need at least {len(terms) + 2} local estimates to "
                            f"extrapolate, have {len(ns)}")
    X = np.array([[1.0] + [f(n, sigma) for f in terms] for n in ns])
    y = np.array([float(seq[n]) for n in ns])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    res = y - X @ coef
    return float(coef[0]), float(coef[1]), float(np.sqrt(np.mean(res ** 2)))


def _band(seq, K, correction="1/n", sigma=SIGMA):
    """Spread of the extrapolant when ``K`` is varied by +-4."""
    base = extrapolate(seq, K, correction, sigma)[0]
    alts = []
    need = len(CORRECTIONS[correction]) + 2
    for k in (K - 4, K + 4):
        if k >= need and len(seq) >= k:
            alts.append(extrapolate(seq, k, correction, sigma)[0])
    return max((abs(v - base) for v in alts), default=0.0)


# --------------------------------------------------------------------------
# ratios and sigma


def ratios(a: WeightedSeries, mode="adjacent"):
    """``r_n = a_n / a_{n-1}``, or ``sqrt(a_n / a_{n-2})`` with ``mode="sqrt_skip2"``.

    Ratios are of the series as given, so a normalized series yields
    ``r_n e^{-beta}``.
    """
    if len(a) < 3:
        raise AnalysisError("ratios need at least 3 terms")
    if any(v <= 0 for v in a.values.values()):
        raise AnalysisError("ratios need a positive series")
    v = a.values
    with mpmath.workdps(a.dps):
        if mode == "adjacent":
            return {n: v[n] / v[n - 1] for n in _consecutive(v, 1)}
        if mode == "sqrt_skip2":
            return {n: mpmath.sqrt(v[n] / v[n - 2]) for n in _consecutive(v, 2)}
    raise ValueError(f"unknown ratio mode {mode!r}")


def _raw_ratios(a, mode="adjacent"):
    return ratios(a.as_raw(), mode)


def s_sequence(a, beta=None, mode="adjacent"):
    """``s_n = r_n e^{-beta} - 1``."""
    with mpmath.workdps(a.dps):
        eb = mpmath.exp(-_beta(beta, a.dps))
        return {n: r * eb - 1 for n, r in _raw_ratios(a, mode).items()}


def t_sequence(s):
    """``t_n = n s_n - (n-1) s_{n-1}``."""
    return {n: n * s[n] - (n - 1) * s[n - 1] for n in _consecutive(s)}


@dataclass(frozen=True)
class SigmaEstimate:
    local: dict
    estimate: float
    slope: float
    residual: float
    skipped: list
    band: float = 0.0


SC_TOL = 1e-9
SC_MAX_ITER = 100


def _finish_sigma(local, skipped, K, correction, self_consistent=False):
    """Extrapolate local sigma estimates.

    With ``self_consistent`` the exponent inside the correction terms is
    not fixed at 3/7 but set to the current estimate and iterated to a
    fixed point.
    """
    if len(local) < 4:
        raise AnalysisError(f"fewer than 4 usable local estimates ({len(local)})")
    s = SIGMA
    est, slope, res = extrapolate(local, K, correction, s)
    if self_consistent:
        for _ in range(SC_MAX_ITER):
            if not 0 < est < 1:
                raise AnalysisError(f"self-consistent sigma left (0, 1): {est}")
            if abs(est - s) < SC_TOL:
                break
            s = est
            est, slope, res = extrapolate(local, K, correction, s)
        else:
            raise AnalysisError("self-consistent sigma did not converge")
    return SigmaEstimate({n: float(v) for n, v in local.items()}, est, slope, res,
                         skipped, _band(local, K, correction, s))


def sigma_from_ratios(a: WeightedSeries, beta=None, K=K_DEFAULT, window=None,
                      correction="1/n", self_consistent=False):
    """Local estimates of ``sigma`` from the decay of ``1 - r_n e^{-beta}``.

    ``1 - sigma_n = [log(1 - r_n e^{-b}) - log(1 - r_{n-1} e^{-b})]
    / [log(n-1) - log n]``, extrapolated against ``1/n`` by default. The
    ``g/n`` term in ``s_n`` perturbs the local values by ``O(n^{-sigma})``;
    ``correction="n^-sigma"`` fits that term instead, which is more accurate
    for long series but unstable on short ones; ``self_consistent=True``
    also replaces the 3/7 in that term by the estimate itself. Terms where
    ``r_n e^{-beta} >= 1`` are skipped and listed.
    """
    s = s_sequence(a, beta)
    skipped = [n for n in sorted(s) if s[n] >= 0]
    if skipped:
        warnings.warn(f"sigma_from_ratios: r_n e^-beta >= 1 at n={skipped}; skipped")
    with mpmath.workdps(a.dps):
        lg = {n: mpmath.log(-v) for n, v in s.items() if v < 0}
        local = {n: 1 - (lg[n] - lg[n - 1]) / (mpmath.log(n - 1) - mpmath.log(n))
                 for n in _consecutive(lg)}
    return _finish_sigma(_clip(local, window), skipped, K, correction, self_consistent)


def sigma_from_loglog(a: WeightedSeries, beta=None, K=K_DEFAULT, window=None,
                      correction="log_n^-sigma", self_consistent=False):
    """Local slopes of ``log|log(a_n e^{-beta n})|`` against ``log n``.

    The ``g log n + const`` part of ``log(a_n e^{-beta n})`` shifts the
    slopes by terms in ``n^{-sigma}`` and ``log(n) n^{-sigma}``; both are
    fitted out, with ``sigma = 3/7`` in those terms unless ``self_consistent``.
    """
    la = _raw_logs(a)
    with mpmath.workdps(a.dps):
        b = _beta(beta, a.dps)
        q = {n: v - b * n for n, v in la.items()}
        skipped = [n for n in sorted(q) if q[n] == 0 and n >= 2]
        if skipped:
            warnings.warn(f"sigma_from_loglog: log(a_n e^-beta n) vanishes at n={skipped}")
        ll = {n: mpmath.log(abs(v)) for n, v in q.items() if n >= 2 and n not in skipped}
        local = {n: (ll[n] - ll[n - 1]) / (mpmath.log(n) - mpmath.log(n - 1))
                 for n in _consecutive(ll)}
    return _finish_sigma(_clip(local, window), skipped, K, correction, self_consistent)


def ratio_linearity(a: WeightedSeries, thetas=(1.0, 2 / 3, 4 / 7, 0.5), window=None):
    """RMS residual of a straight-line fit of ``r_n`` against ``1/n^theta``.

    For ``sigma = 3/7`` the ratios are linear in ``n^{sigma-1} = 1/n^{4/7}``.
    """
    r = _clip(_raw_ratios(a), window)
    ns = sorted(r)
    y = np.array([float(r[n]) for n in ns])
    out = {}
    for th in thetas:
        x = np.array([float(n) ** -th for n in ns])
        X = np.column_stack([np.ones_like(x), x])
        coef, *_ = np.linalg.lstsq(X, y, rcond=None)
        out[th] = float(np.sqrt(np.mean((y - X @ coef) ** 2)))
    return out


# --------------------------------------------------------------------------
# log mu_1


def _logratio_terms(sigma, terms):
    """Basis of the log-ratio expansion ``log r_n - beta``."""
    basis = [lambda n: n ** (sigma - 1.0), lambda n: 1.0 / n]
    if terms == 3:
        basis.append(lambda n: n ** (2.0 * sigma - 2.0))
    return basis


def _logratio(a, beta, mode="adjacent"):
    with mpmath.workdps(a.dps):
        b = _beta(beta, a.dps)
        return {n: mpmath.log(r) - b for n, r in _raw_ratios(a, mode).items()}


def _linear_fit(ns, y, basis):
    X = np.array([[f(n) for f in basis] for n in ns], dtype=float)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    return coef, float(np.sqrt(np.mean((y - X @ coef) ** 2)))


def _gauss_newton(fun, p0, ns, y):
    """Damped Gauss-Newton with forward-difference Jacobian.

    Returns ``(params, rms_residual, converged, iterations)``.
    """
    p = np.array(p0, dtype=float)

    def resid(q):
        return np.array([fun(n, q) for n in ns]) - y

    r = resid(p)
    cost = float(r @ r)
    for it in range(1, GN_MAX_ITER + 1):
        J = np.empty((len(ns), p.size))
        for j in range(p.size):
            h = GN_REL_STEP * max(abs(p[j]), 1.0)
            q = p.copy()
            q[j] += h
            J[:, j] = (resid(q) - r) / h
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        lam = 1.0
        while lam > 1e-8:
            q = p + lam * step
            rq = resid(q)
            cq = float(rq @ rq)
            if np.all(np.isfinite(rq)) and cq <= cost:
                break
            lam /= 2
        else:
            return p, math.sqrt(cost / len(ns)), False, it
        delta = np.max(np.abs(q - p) / np.maximum(np.abs(p), 1.0))
        p, r, cost = q, rq, cq
        if delta < GN_TOL:
            return p, math.sqrt(cost / len(ns)), True, it
    return p, math.sqrt(cost / len(ns)), False, GN_MAX_ITER


def _ratio_fit(a, beta, sigma, terms, window, mode):
    y_all = _logratio(a, beta, mode)
    ns = sorted(_clip(y_all, window))
    if len(ns) < terms + 1:
        raise AnalysisError(f"window {window} holds {len(ns)} log-ratios")
    y = np.array([float(y_all[n]) for n in ns])
    (c1, g), res = _linear_fit(ns, y, _logratio_terms(sigma, 2))
    L0 = c1 / sigma
    if terms == 2:
        return {"log_mu1": float(L0), "g": float(g)}, res, True, {}

    def model(n, p):
        L, gg = p
        return sigma * L * n ** (sigma - 1) + gg / n + (sigma * L) ** 2 / (2 * n ** (2 - 2 * sigma))

    p, res, ok, it = _gauss_newton(model, (L0, g), ns, y)
    est = {"log_mu1": float(p[0]), "g": float(p[1])} if ok else {}
    return est, res, ok, {"iterations": it}


def _sweep_windows(ns, n_hi):
    first = min(ns)
    out = []
    for n_min in range(n_hi - 30, n_hi - 3, 2):
        if n_min >= first:
            out.append((n_min, n_hi))
    return out or [(first, n_hi)]


def _method_i(a, beta, sigma, terms, window, mode, K):
    y_all = _logratio(a, beta, mode)
    if window is not None:
        est, res, ok, extra = _ratio_fit(a, beta, sigma, terms, window, mode)
        return est, ok, window, {"residual": res, **extra}
    n_hi = max(y_all)
    sweep = []
    last = None
    for w in _sweep_windows(sorted(y_all), n_hi):
        try:
            est, res, ok, _ = _ratio_fit(a, beta, sigma, terms, w, mode)
        except AnalysisError:
            continue
        sweep.append({"n_min": w[0], "log_mu1": est.get("log_mu1"), "converged": ok})
        last = (est, res, ok, w)
    if last is None:
        raise AnalysisError("no window of the sweep holds enough terms")
    est, res, ok, w = last
    return est, ok, w, {"residual": res, "sweep": sweep, "ratio_mode": mode}


def _solve_local(seq, basis, width):
    """Solve ``seq[k] = sum_j c_j basis_j(k)`` exactly on runs of ``width`` terms."""
    out = {}
    for n in sorted(seq):
        run = list(range(n - width + 1, n + 1))
        if not all(k in seq for k in run):
            continue
        X = np.array([[f(k) for f in basis] for k in run], dtype=float)
        y = np.array([float(seq[k]) for k in run])
        try:
            out[n] = np.linalg.solve(X, y)
        except np.linalg.LinAlgError:
            continue
    return out


def _method_ii(a, beta, sigma, width, window, K):
    la = _raw_logs(a)
    with mpmath.workdps(a.dps):
        b = _beta(beta, a.dps)
        q = {n: v - b * n for n, v in la.items()}
    basis = [lambda n: n ** sigma, lambda n: math.log(n)]
    if width == 3:
        basis.append(lambda n: 1.0)
    sols = _clip(_solve_local(q, basis, width), window)
    return _from_local(sols, {"log_mu1": lambda c: c[0], "g": lambda c: c[1]}, K)


def _method_iii(a, beta, sigma, terms, window, K):
    y = _logratio(a, beta)
    basis = _logratio_terms(sigma, terms)
    sols = _clip(_solve_local(y, basis, terms), window)
    return _from_local(sols, {"log_mu1": lambda c: c[0] / sigma, "g": lambda c: c[1]}, K)


def _from_local(sols, getters, K):
    if len(sols) < 3:
        raise AnalysisError("too few local solutions to extrapolate")
    est, diag = {}, {}
    for name, get in getters.items():
        seq = {n: get(c) for n, c in sols.items()}
        val, slope, res = extrapolate(seq, K)
        est[name] = val
        diag[name] = {"last_local": float(seq[max(seq)]), "slope": slope, "residual": res}
    ok = all(math.isfinite(v) for v in est.values())
    ns = sorted(sols)
    return (est if ok else {}), ok, (ns[0], ns[-1]), diag


def _gradient_method(seq, sigma, scale, window, K, correction):
    X = {n: mpmath.mpf(n) ** (sigma - 1) for n in seq}
    grad = {n: (seq[n] - seq[n - 1]) / (X[n] - X[n - 1]) for n in _consecutive(seq)}
    grad = _clip(grad, window)
    if len(grad) < 3:
        raise AnalysisError("too few local gradients to extrapolate")
    val, slope, res = extrapolate(grad, K, correction, sigma)
    L = val / scale
    ns = sorted(grad)
    diag = {"last_local": float(grad[ns[-1]]) / scale, "slope": slope, "residual": res}
    ok = math.isfinite(L)
    return ({"log_mu1": L} if ok else {}), ok, (ns[0], ns[-1]), diag


def _method_vi(a, sigma, window, K):
    """``d_n = A_n^{n^{-sigma}}`` with ``A_n`` the normalized series.

    ``log d_n = log mu_1 + (g log n + const) n^{-sigma}``, so ``log d_n`` is
    extrapolated with both correction terms.
    """
    norm = a.as_normalized()
    with mpmath.workdps(a.dps):
        logd = {n: mpmath.log(v) * mpmath.mpf(n) ** (-mpmath.mpf(sigma))
                for n, v in norm.values.items() if n >= 2}
    logd = _clip(logd, window)
    if len(logd) < 4:
        raise AnalysisError("too few terms for the direct root")
    val, slope, res = extrapolate(logd, K, "log_n^-sigma", sigma)
    ns = sorted(logd)
    return {"log_mu1": val}, math.isfinite(val), (ns[0], ns[-1]), {
        "mu1": math.exp(val), "last_local": float(mpmath.exp(logd[ns[-1]])),
        "slope": slope, "residual": res}


def fit_mu1(a: WeightedSeries, beta=None, sigma=SIGMA, method="s_n_gradient", window=None,
            K=K_DEFAULT, ratio_mode="adjacent") -> EstimateRecord:
    """Estimate ``log mu_1`` with one of the six method families.

    Parameters
    ----------
    a : WeightedSeries
        Positive series; either normalization is accepted.
    beta : float, optional
        ``log e^beta``; defaults to the stored lattice constant.
    sigma : float
        Stretch exponent, taken as known.
    method : str
        One of :data:`METHODS`. ``ratio_fit_*`` are method (i), least-squares
        fits of ``log r_n - beta`` over a window (a sweep of windows when
        ``window`` is None, reporting the last); ``coeff_*`` are method (ii),
        exact solves of ``log a_n - n beta`` on pairs or triples;
        ``logratio_solve*`` are method (iii), the same solves applied to
        ``log r_n - beta``; ``s_n_gradient`` and ``t_n_gradient`` are methods
        (iv) and (v); ``direct_root`` is method (vi).
    window : (int, int), optional
        Inclusive range of ``n`` used.

    Returns
    -------
    EstimateRecord
        Carries no estimate when the fit failed to converge.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    sigma = float(sigma)
    u = float(a.u)
    try:
        if method in ("ratio_fit_2", "ratio_fit_3"):
            est, ok, w, diag = _method_i(a, beta, sigma, int(method[-1]), window, ratio_mode, K)
        elif method == "coeff_pairs":
            est, ok, w, diag = _method_ii(a, beta, sigma, 2, window, K)
        elif method == "coeff_triples":
            est, ok, w, diag = _method_ii(a, beta, sigma, 3, window, K)
        elif method == "logratio_solve":
            est, ok, w, diag = _method_iii(a, beta, sigma, 2, window, K)
        elif method == "logratio_solve_3":
            est, ok, w, diag = _method_iii(a, beta, sigma, 3, window, K)
        elif method == "s_n_gradient":
            s = s_sequence(a, beta)
            # the g/n term of s_n leaves an O(n^-sigma) slope correction
            est, ok, w, diag = _gradient_method(s, sigma, sigma, window, K, "n^-sigma")
        elif method == "t_n_gradient":
            t = t_sequence(s_sequence(a, beta))
            est, ok, w, diag = _gradient_method(t, sigma, sigma ** 2, window, K, "n^(sigma-1)")
        else:
            est, ok, w, diag = _method_vi(a, sigma, window, K)
    except (AnalysisError, ZeroDivisionError, ValueError, np.linalg.LinAlgError) as exc:
        ns = a.n_values
        return EstimateRecord(method, u, window or (ns[0], ns[-1]), {}, False,
                              {"reason": str(exc)})
    if not ok:
        est = {}
    return EstimateRecord(method, u, tuple(int(x) for x in w), est, ok, diag)


def fit_all(a, beta=None, sigma=SIGMA, methods=METHODS, K=K_DEFAULT):
    return [fit_mu1(a, beta, sigma, m, K=K) for m in methods]


def combine_estimates(records, key="log_mu1", n_mad=3.0):
    """Average of converged estimates after dropping outliers.

    Records more than ``n_mad`` median absolute deviations from the median
    are dropped. Returns ``(value, kept_methods, dropped_methods)``; value is
    None when nothing converged.
    """
    vals = [(r.method, r.estimates[key]) for r in records
            if r.converged and key in r.estimates]
    if not vals:
        return None, [], [r.method for r in records]
    xs = np.array([v for _, v in vals])
    med = float(np.median(xs))
    mad = float(np.median(np.abs(xs - med)))
    keep = [(m, v) for m, v in vals if abs(v - med) <= n_mad * mad or mad == 0 and v == med]
    if not keep:
        keep = vals
    kept = {m for m, _ in keep}
    dropped = [r.method for r in records if r.method not in kept]
    return float(np.mean([v for _, v in keep])), sorted(kept), dropped


def fit_u_dependence(records):
    """Least-squares fit of ``log mu_1 = -c u^p`` over several ``u``.

    ``records`` is an iterable of EstimateRecord or ``(u, log_mu1)`` pairs.
    Returns ``(c, p)``.
    """
    pts = {}
    for r in records:
        if isinstance(r, EstimateRecord):
            if not r.converged or r.log_mu1 is None:
                continue
            u, L = r.u, r.log_mu1
        else:
            u, L = r
        u, L = float(u), float(L)
        if u <= 0 or L >= 0:
            raise AnalysisError(f"need u > 0 and log mu_1 < 0, got ({u}, {L})")
        pts.setdefault(u, []).append(L)
    if len(pts) < 3:
        raise AnalysisError(f"need estimates at 3 distinct u, have {len(pts)}")
    us = np.array(sorted(pts))
    Ls = np.array([np.mean(pts[u]) for u in us])
    X = np.column_stack([np.ones_like(us), np.log(us)])
    coef, *_ = np.linalg.lstsq(X, np.log(-Ls), rcond=None)
    return float(np.exp(coef[0])), float(coef[1])


@dataclass(frozen=True)
class ExponentEstimate:
    local: dict
    estimate: float
    band: float
    slope: float
    residual: float


def _exponent_from_ratio(rho, K, window):
    """``rho_n ~ 1 + x/n``: extrapolate ``n (rho_n - 1)`` against ``1/n``."""
    local = _clip({n: n * (v - 1) for n, v in rho.items()}, window)
    if len(local) < 3:
        raise AnalysisError("too few ratios for an exponent estimate")
    est, slope, res = extrapolate(local, K)
    return ExponentEstimate({n: float(v) for n, v in local.items()}, est,
                            _band(local, K), slope, res)


def estimate_g(a: WeightedSeries, beta=None, sigma=SIGMA, log_mu1=None, K=K_DEFAULT,
               window=None):
    """Exponent ``g`` from coefficients divided by ``e^{beta n} mu_1^{n^sigma}``.

    Ratios of the divided coefficients behave as ``1 + g/n``.
    """
    if log_mu1 is None:
        raise AnalysisError("estimate_g needs a converged log mu_1")
    la = _raw_logs(a)
    with mpmath.workdps(a.dps):
        b = _beta(beta, a.dps)
        L, s = mpmath.mpf(log_mu1), mpmath.mpf(sigma)
        e = {n: v - b * n - mpmath.mpf(n) ** s * L for n, v in la.items()}
        rho = {n: mpmath.exp(e[n] - e[n - 1]) for n in _consecutive(e)}
    return _exponent_from_ratio(rho, K, window)


def estimate_alpha(c_series: WeightedSeries, b_series: WeightedSeries, K=K_DEFAULT,
                   window=None):
    """Exponent gap from ``v_n = c_n / b_n``, whose ratios behave as ``1 + alpha/n``."""
    if c_series.beta_mode != b_series.beta_mode:
        c_series, b_series = c_series.as_raw(), b_series.as_raw()
    common = sorted(set(c_series.values) & set(b_series.values))
    if len(common) < 4:
        raise AnalysisError("series share fewer than 4 orders")
    with mpmath.workdps(max(c_series.dps, b_series.dps)):
        v = {n: c_series.values[n] / b_series.values[n] for n in common}
        rho = {n: v[n] / v[n - 1] for n in _consecutive(v)}
    return _exponent_from_ratio(rho, K, window)


def estimate_power_exponent(a: WeightedSeries, K=K_DEFAULT, window=None):
    """Exponent of ``a_n ~ A n^gamma`` from local slopes of ``log a_n`` vs ``log n``."""
    norm = a.as_normalized()
    with mpmath.workdps(a.dps):
        la = {n: mpmath.log(v) for n, v in norm.values.items() if n >= 1}
        local = {n: (la[n] - la[n - 1]) / (mpmath.log(n) - mpmath.log(n - 1))
                 for n in _consecutive(la) if n >= 2}
    local = _clip(local, window)
    if len(local) < 3:
        raise AnalysisError("too few terms for a power-law exponent")
    est, slope, res = extrapolate(local, K)
    return ExponentEstimate({n: float(v) for n, v in local.items()}, est,
                            _band(local, K), slope, res)


def synthesize_series(model: AsymptoticModel, n_max, correction=0.0, n_min=1, u=0.0,
                      dps=DEFAULT_DPS) -> WeightedSeries:
    """Evaluate ``model`` at ``n = n_min..n_max`` as a raw series.

    ``correction`` multiplies each term by ``1 + correction / n^{4/7}``.
    """
    if n_max < n_min:
        raise ValueError("n_max must be >= n_min")
    with mpmath.workdps(dps):
        vals = {}
        for n in range(n_min, n_max + 1):
            v = model.value(n)
            if correction:
                v *= 1 + mpmath.mpf(correction) / mpmath.mpf(n) ** (mpmath.mpf(4) / 7)
            if not mpmath.isfinite(v) or v <= 0:
                raise OverflowError(f"model value at n={n} is not a positive finite number")
            vals[n] = v
    return WeightedSeries(u, "raw", vals, "synthetic", dps,
                          {"model": {k: float(getattr(model, k)) for k in
                                     ("beta", "log_mu1", "sigma", "g", "const")},
                           "correction": float(correction)})


def beta1_from_lambda1(lambda1):
    """Invert ``lambda_1 = 7 * 3^{-3/7} * 4^{-4/7} * beta_1^{3/7}``."""
    k = 7 * 3 ** (-3 / 7) * 4 ** (-4 / 7)
    return (lambda1 / k) ** (7 / 3)


__all__ = ["AsymptoticModel", "EstimateRecord", "SigmaEstimate", "ExponentEstimate",
           "METHODS", "ratios", "s_sequence", "t_sequence", "sigma_from_ratios",
           "sigma_from_loglog", "ratio_linearity", "fit_mu1", "fit_all", "combine_estimates",
           "fit_u_dependence", "estimate_g", "estimate_alpha", "estimate_power_exponent",
           "synthesize_series", "extrapolate", "beta1_from_lambda1"]
