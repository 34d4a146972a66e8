"""Independent reference computations used by the test-suite.

Nothing here imports from the package: the Fock-basis coherence is built
from Kraus operators and photon-number distributions, the shift from an
mpmath evaluation of the metric, the overlap from brute-force sums.
"""

import math

import mpmath
import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import comb


def tmss_amplitudes(s, cutoff):
    n = np.arange(cutoff + 1)
    return np.tanh(s) ** n / np.cosh(s)


def loss_kraus_amplitude(eta, n, k):
    """<n-k| A_k |n> for a pure-loss channel with transmissivity eta."""
    if k > n:
        return 0.0
    return math.sqrt(comb(n, k, exact=True) * eta ** (n - k) * (1 - eta) ** k)


def lossy_tmss_sectors(s, eta1, eta2, cutoff):
    """Density matrix of the squeezed pair after independent losses.

    The state is block diagonal in d = n1 - n2; returns {d: (n1_values,
    n2_values, block)}.  Each Kraus pair (k1, k2) maps |n, n> to
    |n - k1, n - k2>, i.e. into sector d = k2 - k1.
    """
    c = tmss_amplitudes(s, cutoff)
    blocks = {}
    ks1 = range(cutoff + 1) if eta1 < 1 else [0]
    ks2 = range(cutoff + 1) if eta2 < 1 else [0]
    for k1 in ks1:
        for k2 in ks2:
            d = k2 - k1
            n_lo = max(k1, k2)
            ns = np.arange(n_lo, cutoff + 1)
            if len(ns) == 0:
                continue
            vec = np.array(
                [c[n] * loss_kraus_amplitude(eta1, n, k1) * loss_kraus_amplitude(eta2, n, k2) for n in ns]
            )
            # index states in the sector by n1 = n - k1
            n1 = ns - k1
            if d not in blocks:
                m1 = np.arange(0, cutoff + 1)
                m1 = m1[(m1 - d >= 0) & (m1 - d <= cutoff)]
                blocks[d] = (m1, m1 - d, np.zeros((len(m1), len(m1))))
            m1, _, block = blocks[d]
            idx = np.searchsorted(m1, n1)
            block[np.ix_(idx, idx)] += np.outer(vec, vec)
    return blocks


def lossy_tmss_dense(s, eta1, eta2, cutoff):
    """Same state as a dense (cutoff+1)^2 matrix; only for small cutoffs."""
    dim = cutoff + 1
    psi = np.diag(tmss_amplitudes(s, cutoff))
    rho = np.einsum("ij,kl->ijkl", psi, psi)
    for mode, eta in ((0, eta1), (1, eta2)):
        out = np.zeros_like(rho)
        for k in range(dim):
            a = np.zeros((dim, dim))
            for n in range(k, dim):
                a[n - k, n] = loss_kraus_amplitude(eta, n, k)
            if mode == 0:
                out += np.einsum("ai,ijkl,bk->ajbl", a, rho, a)
            else:
                out += np.einsum("aj,ijkl,bl->iakb", a, rho, a)
        rho = out
    return rho.reshape(dim * dim, dim * dim)


def _xlog2x(p):
    p = p[p > 1e-300]
    return float(np.sum(p * np.log2(p)))


def fock_coherence(s, eta1=1.0, eta2=1.0, cutoff=40):
    """Relative entropy of coherence to the closest product of thermal states.

    Returns (coherence_bits, entropy_bits, (nbar1, nbar2)).  The thermal
    reference occupations are found by numerical minimisation rather than
    assumed.
    """
    blocks = lossy_tmss_sectors(s, eta1, eta2, cutoff)
    eigs = []
    p1 = np.zeros(cutoff + 1)
    p2 = np.zeros(cutoff + 1)
    for m1, m2, block in blocks.values():
        eigs.append(np.linalg.eigvalsh(block))
        diag = np.diag(block)
        np.add.at(p1, m1, diag)
        np.add.at(p2, m2, diag)
    entropy = -_xlog2x(np.clip(np.concatenate(eigs), 0, None))
    n = np.arange(cutoff + 1)

    def cross_entropy(p, m):
        # -sum_n p(n) log2 tau_m(n), tau_m(n) = m^n / (m+1)^(n+1)
        return float(np.sum(p * ((n + 1) * np.log2(m + 1) - n * np.log2(m))))

    total = 0.0
    nbars = []
    for p in (p1, p2):
        mean = float(np.sum(n * p))
        nbars.append(mean)
        if mean < 1e-15:
            continue
        res = minimize_scalar(lambda m: cross_entropy(p, m), bounds=(mean / 10, mean * 10 + 1), method="bounded",
                              options={"xatol": 1e-12})
        total += res.fun
    return total - entropy, entropy, tuple(nbars)


def exact_delta_mp(M, a, w, r_a, h, eps=1, dps=60):
    """sqrt(Omega_B/Omega_A) - 1 straight from the Kerr metric with mpmath."""
    with mpmath.workdps(dps):
        M, a, w, r_a = (mpmath.mpf(x) for x in (M, a, w, r_a))
        r_b = r_a + mpmath.mpf(h)
        # ground clock: -(g_tt + 2 g_tphi w + g_phiphi w^2) at r_a, theta = pi/2
        g_tt = -(1 - 2 * M / r_a)
        g_tphi = -2 * M * a / r_a
        g_pp = r_a**2 + a**2 + 2 * M * a**2 / r_a
        ground = mpmath.sqrt(-(g_tt + 2 * g_tphi * w + g_pp * w**2))
        y = eps * (a / r_b) * mpmath.sqrt(M / r_b)
        ratio = (1 + y) * ground / mpmath.sqrt(1 - 3 * M / r_b + 2 * y)
        return mpmath.sqrt(ratio) - 1


def overlap_riemann(ratio, delta, lower=0.0, n=400_001):
    """Brute-force Riemann sum of F_B * F_A in units of the bandwidth."""
    k = 1 + delta
    centre = ratio * (1 + delta / 2)
    half = 40 * max(1.0, k)
    lo = centre - half if lower is None else max(lower, centre - half)
    u = np.linspace(lo, centre + half, n)
    f_a = (2 * np.pi) ** -0.25 * np.exp(-((u - ratio) ** 2) / 4)
    f_b = (2 * np.pi) ** -0.25 * np.exp(-((u / k - ratio) ** 2) / 4) / np.sqrt(k)
    return float(np.trapezoid(f_a * f_b, u))
