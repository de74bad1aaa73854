"""Independent oracles and samplers used across the test suite.

Everything here is deliberately written from first principles, separate from
the library code paths it checks: high-precision Bessel evaluation through
mpmath, dense finite-difference information matrices, analytic Gaussian
score/curvature matrices, and brute-force quadrature for marginal
likelihoods.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np

mp.mp.dps = 50


# ---------------------------------------------------------------------------
# high-precision Bessel references
# ---------------------------------------------------------------------------

def bessel_ratio_mp(d: int, kappa: float) -> float:
    return float(mp.besseli(d / 2.0, kappa) / mp.besseli(d / 2.0 - 1.0, kappa))


def log_vmf_normalizer_mp(d: int, kappa: float) -> float:
    v = mp.mpf(d) / 2 - 1
    return float(
        (mp.mpf(d) / 2) * mp.log(2 * mp.pi)
        + mp.log(mp.besseli(v, mp.mpf(kappa)))
        - v * mp.log(mp.mpf(kappa))
    )


# ---------------------------------------------------------------------------
# independent spherical-coordinate maps (loop implementations)
# ---------------------------------------------------------------------------

def sph_to_vec(theta: np.ndarray) -> np.ndarray:
    d = len(theta) + 1
    w = np.empty(d)
    running = 1.0
    for i in range(d - 1):
        w[i] = math.cos(theta[i]) * running
        running *= math.sin(theta[i])
    w[d - 1] = running
    return w


def vec_to_sph(w: np.ndarray) -> np.ndarray:
    d = len(w)
    theta = np.empty(d - 1)
    for i in range(d - 2):
        tail = math.sqrt(float(np.sum(w[i + 1 :] ** 2)))
        theta[i] = math.atan2(tail, w[i])
    last = math.atan2(w[-1], w[-2])
    theta[d - 2] = last if last >= 0 else last + 2 * math.pi
    return theta


# ---------------------------------------------------------------------------
# dense finite-difference penalty for the sphere model
# ---------------------------------------------------------------------------

def vmf_dense_tic_fd(x: np.ndarray, mu_hat: np.ndarray, kappa_hat: float,
                     step: float = 1e-5) -> float:
    """tr(I J^-1) with full matrices from central differences.

    Parameters are ordered (kappa, theta_1, ..., theta_{d-1}).  The
    normalizer enters only the kappa coordinate; its first and second
    differences are taken in 50-digit arithmetic so the float64 subtraction
    noise cannot pollute the curvature.
    """
    n, d = x.shape
    theta = vec_to_sph(mu_hat)
    p = d  # parameter count: 1 concentration + d-1 angles

    lz = {}
    for k in (kappa_hat - step, kappa_hat, kappa_hat + step):
        v = mp.mpf(d) / 2 - 1
        lz[k] = (mp.mpf(d) / 2) * mp.log(2 * mp.pi) + mp.log(mp.besseli(v, mp.mpf(k))) - v * mp.log(mp.mpf(k))
    dlz = float((lz[kappa_hat + step] - lz[kappa_hat - step]) / (2 * step))
    d2lz = float((lz[kappa_hat + step] - 2 * lz[kappa_hat] + lz[kappa_hat - step]) / step**2)

    def dot_mu(theta_vec: np.ndarray) -> np.ndarray:
        return x @ sph_to_vec(theta_vec)

    base = dot_mu(theta)

    # first differences of w . mu(theta) per angle
    ddot = np.empty((n, d - 1))
    d2dot = np.empty((n, d - 1))
    for a in range(d - 1):
        plus = theta.copy(); plus[a] += step
        minus = theta.copy(); minus[a] -= step
        dp, dm = dot_mu(plus), dot_mu(minus)
        ddot[:, a] = (dp - dm) / (2 * step)
        d2dot[:, a] = (dp - 2 * base + dm) / step**2

    grads = np.empty((n, p))
    grads[:, 0] = base - dlz
    grads[:, 1:] = kappa_hat * ddot

    hessians = np.zeros((n, p, p))
    hessians[:, 0, 0] = -d2lz
    for a in range(d - 1):
        hessians[:, 0, 1 + a] = ddot[:, a]  # d/dkappa of kappa * ddot is ddot
        hessians[:, 1 + a, 0] = ddot[:, a]
        hessians[:, 1 + a, 1 + a] = kappa_hat * d2dot[:, a]
    for a in range(d - 1):
        for b in range(a + 1, d - 1):
            pp = theta.copy(); pp[a] += step; pp[b] += step
            pm = theta.copy(); pm[a] += step; pm[b] -= step
            mp_ = theta.copy(); mp_[a] -= step; mp_[b] += step
            mm = theta.copy(); mm[a] -= step; mm[b] -= step
            mixed = (dot_mu(pp) - dot_mu(pm) - dot_mu(mp_) + dot_mu(mm)) / (4 * step**2)
            hessians[:, 1 + a, 1 + b] = kappa_hat * mixed
            hessians[:, 1 + b, 1 + a] = kappa_hat * mixed

    info = np.einsum("ni,nj->ij", grads, grads) / n
    curv = -hessians.mean(axis=0)
    return float(np.trace(info @ np.linalg.inv(curv)))


# ---------------------------------------------------------------------------
# exact dense penalty for the diagonal Gaussian (analytic scores)
# ---------------------------------------------------------------------------

def gaussian_dense_tic(x: np.ndarray) -> float:
    """tr(I J^-1) with full matrices in (mean, precision) coordinates."""
    n, d = x.shape
    mu = x.mean(axis=0)
    dev = x - mu
    var = (dev**2).mean(axis=0)

    grads = np.empty((n, 2 * d))
    grads[:, :d] = dev / var  # lambda^2 * (x - mu)
    grads[:, d:] = 0.5 * (var - dev**2)

    curv = np.zeros((2 * d, 2 * d))
    curv[np.arange(d), np.arange(d)] = 1.0 / var
    curv[np.arange(d, 2 * d), np.arange(d, 2 * d)] = 0.5 * var**2
    mean_dev = dev.mean(axis=0)  # ~0 up to roundoff; keep it honest
    curv[np.arange(d), np.arange(d, 2 * d)] = -mean_dev
    curv[np.arange(d, 2 * d), np.arange(d)] = -mean_dev

    info = grads.T @ grads / n
    return float(np.trace(info @ np.linalg.inv(curv)))


def spherical_dense_tic(x: np.ndarray) -> float:
    """Same construction for the pooled-variance model, (mu_1..mu_d, lambda^2)."""
    n, d = x.shape
    mu = x.mean(axis=0)
    dev = x - mu
    pool = float((dev**2).mean())
    lam2 = 1.0 / pool
    q = (dev**2).sum(axis=1)

    grads = np.empty((n, d + 1))
    grads[:, :d] = lam2 * dev
    grads[:, d] = 0.5 * d * pool - 0.5 * q

    curv = np.zeros((d + 1, d + 1))
    curv[np.arange(d), np.arange(d)] = lam2
    curv[d, d] = 0.5 * d * pool**2
    mean_dev = dev.mean(axis=0)
    curv[:d, d] = -mean_dev
    curv[d, :d] = -mean_dev

    info = grads.T @ grads / n
    return float(np.trace(info @ np.linalg.inv(curv)))


# ---------------------------------------------------------------------------
# brute-force marginal likelihood, d = 1
# ---------------------------------------------------------------------------

def nw_log_evidence_quadrature(x: np.ndarray, mu0: float, kappa0: float,
                               nu0: float, t0: float) -> float:
    """2-D quadrature of the Normal likelihood against its conjugate prior."""
    from scipy import integrate

    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    xbar = float(x.mean())
    spread = max(1.0, float(x.std()), abs(xbar - mu0))

    log_gamma_norm = 0.5 * nu0 * math.log(t0 / 2.0) - math.lgamma(nu0 / 2.0)

    def integrand(mu: float, lam: float) -> float:
        loglik = 0.5 * n * math.log(lam / (2 * math.pi)) - 0.5 * lam * float(
            np.sum((x - mu) ** 2)
        )
        log_mu_prior = 0.5 * math.log(kappa0 * lam / (2 * math.pi)) - 0.5 * kappa0 * lam * (
            mu - mu0
        ) ** 2
        log_lam_prior = log_gamma_norm + (0.5 * nu0 - 1.0) * math.log(lam) - 0.5 * t0 * lam
        return math.exp(loglik + log_mu_prior + log_lam_prior)

    # The location integrand is a single bump whose width shrinks like
    # 1/sqrt(lam); keep the window just wide enough that the truncated tail
    # mass is negligible, or the adaptive rule wastes its subdivisions.
    def mu_lo(lam: float) -> float:
        width = 8.0 * spread / math.sqrt(max(lam, 1e-3) * min(n, 4))
        return min(xbar, mu0) - max(width, 0.5 * spread)

    def mu_hi(lam: float) -> float:
        width = 8.0 * spread / math.sqrt(max(lam, 1e-3) * min(n, 4))
        return max(xbar, mu0) + max(width, 0.5 * spread)

    value, _ = integrate.dblquad(
        integrand, 1e-10, 80.0, mu_lo, mu_hi, epsabs=1e-13, epsrel=1e-11
    )
    return math.log(value)


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def sample_vmf(rng: np.random.Generator, mu: np.ndarray, kappa: float, n: int) -> np.ndarray:
    """Rejection sampler for the sphere model (Wood's scheme)."""
    mu = np.asarray(mu, dtype=float)
    mu = mu / np.linalg.norm(mu)
    d = mu.size
    b = (d - 1) / (math.sqrt(4 * kappa**2 + (d - 1) ** 2) + 2 * kappa)
    x0 = (1 - b) / (1 + b)
    c = kappa * x0 + (d - 1) * math.log(1 - x0**2)
    out = np.empty((n, d))
    for i in range(n):
        while True:
            z = rng.beta((d - 1) / 2.0, (d - 1) / 2.0)
            w = (1 - (1 + b) * z) / (1 - (1 - b) * z)
            u = rng.uniform()
            if kappa * w + (d - 1) * math.log(1 - x0 * w) - c >= math.log(u):
                break
        v = rng.standard_normal(d)
        v -= v.dot(mu) * mu
        v /= np.linalg.norm(v)
        out[i] = v * math.sqrt(max(0.0, 1 - w**2)) + w * mu
    return out


def uniform_sphere(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    x = rng.standard_normal((n, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def random_rotation(rng: np.random.Generator, d: int) -> np.ndarray:
    a = rng.standard_normal((d, d))
    q, r = np.linalg.qr(a)
    return q * np.sign(np.diag(r))
