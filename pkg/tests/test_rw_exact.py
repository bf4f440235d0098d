import math

import mpmath
import numpy as np
import pytest

from compsaw.asymptotics import LemmaParams, lemma_closed_form
from compsaw.rw_exact import (StripKernel, kernel_power, kernel_power_iterative, rw_amplitudes,
                              rw_asymptotic, rw_weighted, survival_Fnh)


def mp_weighted(n, u, dps=40):
    """Extended-precision reference: sum over h of e^{-uh} F_n(h), F_n from the odd modes."""
    with mpmath.workdps(dps):
        u = mpmath.mpf(u)
        total, h, prev = mpmath.mpf(0), 2, mpmath.mpf(0)
        while True:
            F = mpmath.mpf(0)
            for j in range(1, h, 2):
                x = j * mpmath.pi / h
                lam = mpmath.cos(x / 2) ** 2
                F += lam ** n * mpmath.sin(x) * mpmath.cot(x / 2)
            term = mpmath.exp(-u * h) * 2 * F / h
            total += term
            if term < prev and term < total * mpmath.mpf(10) ** -30:
                break
            prev, h = term, h + 1
        return mpmath.exp(2 * u) * (1 - mpmath.exp(-u)) * total


def test_kernel_spectrum():
    K = StripKernel(9)
    assert np.all(np.diff(K.eigenvalues) < 0) and np.all(np.abs(K.eigenvalues) < 1)
    assert np.allclose(K.reconstruct(), K.matrix(), atol=1e-12, rtol=0)
    with pytest.raises(ValueError):
        StripKernel(1)


def test_kernel_power_examples():
    for n in range(6):
        assert kernel_power(2, n, 0, 0) == pytest.approx(2.0 ** -n, rel=1e-12)
    assert kernel_power(6, 0, 2, 2) == pytest.approx(1.0)
    assert abs(kernel_power(6, 0, 1, 2)) < 1e-14
    with pytest.raises(ValueError):
        kernel_power(5, 3, 4, 0)


@pytest.mark.parametrize("h,n", [(5, 20), (17, 300), (64, 10_000)])
def test_spectral_matches_iteration(h, n):
    for r, y in ((0, 0), (0, h - 2), (h // 2, 1)):
        a, b = kernel_power(h, n, r, y), kernel_power_iterative(h, n, r, y)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


def test_survival():
    assert survival_Fnh(1, 2) == pytest.approx(0.5)
    seq = [survival_Fnh(30, h) for h in range(2, 40)]
    # flat once h > n + 1, up to round-off
    assert all(a <= b * (1 + 1e-14) for a, b in zip(seq, seq[1:]))
    assert all(survival_Fnh(n + 1, 7) < survival_Fnh(n, 7) for n in range(1, 20))
    # regime 1 << h << sqrt(n)
    h, n = 50, 10_000
    approx = 4 / h * math.exp(-n * math.pi ** 2 / (4 * h * h))
    assert survival_Fnh(n, h) / approx == pytest.approx(1, abs=0.05)
    with pytest.raises(ValueError):
        survival_Fnh(3, 1)


def test_weighted_small():
    assert float(rw_weighted(1, 1)) == pytest.approx((2 + math.exp(-1)) / 4, rel=1e-12)
    # heavy compression leaves only the walks that stay on the boundary line,
    # an E or W choice at every step
    assert float(rw_weighted(3, 40)) == pytest.approx(0.5 ** 3, rel=1e-12)
    with pytest.raises(ValueError):
        rw_weighted(5, 0)


@pytest.mark.parametrize("n,u", [(50, 1.0), (2000, 0.5), (100_000, 1.0)])
def test_log_domain_matches_extended_precision(n, u):
    assert abs(rw_weighted(n, u) / mp_weighted(n, u) - 1) < 1e-10


def test_amplitudes():
    A, lam = rw_amplitudes(1)
    assert lam == pytest.approx(3 * 2 ** (-4 / 3) * math.pi ** (2 / 3))
    assert rw_amplitudes(4)[1] == pytest.approx(4 ** (2 / 3) * lam)
    assert A > 0
    with pytest.raises(ValueError):
        rw_amplitudes(-1)


@pytest.mark.parametrize("u", [0.5, 1.0, 2.0])
def test_amplitudes_from_lemma(u):
    # r = -1, alpha = 2, b = u, k m = n pi^2 u^2 / 2, times 4 e^{2u} (1 - e^{-u})
    n = 10 ** 6
    with mpmath.workdps(30):
        p = LemmaParams(-1, 2, mpmath.mpf(u), mpmath.pi ** 2 * u ** 2 / 2, n)
        value, cf = lemma_closed_form(p)
        pref = 4 * mpmath.exp(2 * u) * (1 - mpmath.exp(-u))
        A, lam = rw_amplitudes(u)
        assert abs(cf.lam * mpmath.cbrt(n) / (lam * mpmath.cbrt(n)) - 1) < 1e-20
        assert abs(pref * value / rw_asymptotic(n, u) - 1) < 1e-20
