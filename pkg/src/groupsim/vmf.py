"""Von Mises-Fisher fitting, log-likelihood, and gradient-based penalty.

The model places mass on the unit sphere with density proportional to
``exp(kappa mu . w)``.  The maximum-likelihood mean direction is the
normalised resultant and the concentration solves A_d(kappa) = R_bar; the
penalty ``tr(I J^-1)`` is evaluated in the polar-angle parametrisation where
the observed information is diagonal, which keeps the whole computation at
O(nd) via one suffix-sum pass.

Log-likelihoods exclude the angle-chart volume term: it carries no
parameters, and in the model-comparison score each observation appears once
on each side so the term cancels identically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embeddings import as_matrix
from .errors import DegenerateCurvatureError
from .hypersphere import from_spherical, to_spherical
from .special import (
    bessel_ratio,
    bessel_second_derivative_term,
    inv_bessel_ratio,
    log_vmf_normalizer,
)

R_BAR_FLOOR = 1e-7
R_BAR_CEIL = 1.0 - 1e-7
ANGLE_CLAMP = 1e-6
CURVATURE_FLOOR = 1e-12


@dataclass(frozen=True)
class VmfFit:
    """Maximum-likelihood fit of a von Mises-Fisher model.

    ``max_loglik`` is the Cartesian-parametrisation value
    ``n (kappa_hat r_bar - log Z(kappa_hat))``; the chart volume term is
    excluded (see module docstring).
    """

    mu_hat: np.ndarray
    theta_hat: np.ndarray
    kappa_hat: float
    r_bar: float
    n: int
    max_loglik: float
    degenerate: bool = False

    @property
    def dim(self) -> int:
        return self.mu_hat.size


def _unit_matrix(data) -> np.ndarray:
    x = as_matrix(data)
    norms = np.linalg.norm(x, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-6):
        worst = float(np.max(np.abs(norms - 1.0)))
        raise ValueError(f"vectors must be unit-norm within 1e-6 (worst deviation {worst:.2e})")
    return x


def fit_vmf(sample, refine_kappa: bool = False) -> VmfFit:
    """Fit mean direction and concentration by maximum likelihood.

    The resultant length is clamped into [1e-7, 1 - 1e-7] so the
    concentration stays finite on degenerate bags (all vectors equal, or
    exactly cancelling); such fits carry ``degenerate=True``.
    """
    x = _unit_matrix(sample)
    n, d = x.shape
    if n < 2:
        raise ValueError("need at least two vectors to fit")
    resultant = x.sum(axis=0)
    resultant_norm = float(np.linalg.norm(resultant))
    raw_r_bar = resultant_norm / n
    degenerate = not (R_BAR_FLOOR <= raw_r_bar <= R_BAR_CEIL)
    r_bar = min(max(raw_r_bar, R_BAR_FLOOR), R_BAR_CEIL)
    if resultant_norm > 0.0:
        mu_hat = resultant / resultant_norm
    else:
        # fully cancelling bag: direction is arbitrary, pick the first vector
        mu_hat = x[0].copy()
    kappa_hat = inv_bessel_ratio(d, r_bar, refine=refine_kappa)
    max_loglik = n * (kappa_hat * r_bar - log_vmf_normalizer(d, kappa_hat))
    return VmfFit(
        mu_hat=mu_hat,
        theta_hat=to_spherical(mu_hat),
        kappa_hat=kappa_hat,
        r_bar=r_bar,
        n=n,
        max_loglik=max_loglik,
        degenerate=degenerate,
    )


def vmf_loglik(fit: VmfFit, sample) -> float:
    """Log-likelihood of a bag of unit vectors at the fit's parameters."""
    x = _unit_matrix(sample)
    if x.shape[1] != fit.dim:
        raise ValueError(f"dimension mismatch: fit has {fit.dim}, sample has {x.shape[1]}")
    dots = x @ fit.mu_hat
    return float(fit.kappa_hat * dots.sum() - x.shape[0] * log_vmf_normalizer(fit.dim, fit.kappa_hat))


def _clamp_angles(theta: np.ndarray) -> np.ndarray:
    """Push each angle at least ANGLE_CLAMP away from multiples of pi/2.

    cot and tan are evaluated at these angles; the chart poles are
    measure-zero but occur on real data (axis-aligned mean directions).
    """
    half_pi = 0.5 * np.pi
    nearest = np.round(theta / half_pi) * half_pi
    delta = theta - nearest
    shift = np.where(delta >= 0.0, ANGLE_CLAMP, -ANGLE_CLAMP)
    return np.where(np.abs(delta) < ANGLE_CLAMP, nearest + shift, theta)


def vmf_tic_penalty(fit: VmfFit, sample) -> float:
    """Gradient/curvature penalty tr(I J^-1) in the polar parametrisation.

    One O(nd) suffix-sum pass produces every per-observation score; the
    curvature is diagonal at the maximum (mixed second derivatives vanish
    there), so the trace splits into d scalar ratios.

    Raises :class:`DegenerateCurvatureError` when a curvature diagonal entry
    falls below 1e-12 (e.g. every vector equal to the mean direction).
    """
    x = _unit_matrix(sample)
    n, d = x.shape
    if d != fit.dim:
        raise ValueError(f"dimension mismatch: fit has {fit.dim}, sample has {d}")
    kappa = fit.kappa_hat
    theta = _clamp_angles(fit.theta_hat)
    # Re-derive the direction from the clamped angles so the suffix sums and
    # the cot/tan factors describe the same point on the sphere.
    mu = from_spherical(theta)

    prods = x * mu  # (n, d)
    suffix = np.cumsum(prods[:, ::-1], axis=1)[:, ::-1]  # suffix[i, k] = sum_{j>=k} w_ij mu_j

    a = bessel_ratio(d, kappa)
    grad_kappa = suffix[:, 0] - a
    info_kappa = float(np.mean(grad_kappa**2))
    curv_kappa = -bessel_second_derivative_term(d, kappa)

    cot = np.cos(theta) / np.sin(theta)
    tan = np.sin(theta) / np.cos(theta)
    grad_theta = kappa * (cot * suffix[:, 1:] - tan * prods[:, :-1])
    info_theta = np.mean(grad_theta**2, axis=0)
    curv_theta = kappa * np.mean(suffix[:, :-1], axis=0)

    curvatures = np.concatenate(([curv_kappa], curv_theta))
    if np.any(curvatures < CURVATURE_FLOOR):
        raise DegenerateCurvatureError(
            f"curvature diagonal below {CURVATURE_FLOOR:g}; penalty undefined on this bag"
        )
    return float(info_kappa / curv_kappa + np.sum(info_theta / curv_theta))
