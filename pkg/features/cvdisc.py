"""
CV Discretisation Module
Projects single-mode states onto the box-ket space, bounds the projection
error and exports the staircase phase profiles of boxed unitaries.

Box integrals use Gauss-Legendre nodes per box (numpy.polynomial.legendre);
each integral is repeated with twice the nodes and the two estimates must
agree within the configured drift.
"""

from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from numpy.polynomial import Polynomial
from numpy.polynomial.legendre import leggauss

from core.config import (GAUSS_NODES, INTEGRATION_DRIFT, MIN_WINDOW_TRACE,
                         SURROGATE_DRIFT, SURROGATE_REFINEMENT, WINDOW_PADDING)
from core.errors import (DomainError, NumericalIntegrationError,
                         ParameterError, StateOutsideWindowError)
from core.opalg import trace_distance
from features.wavefunctions import (mixture_kernel, norm_squared,
                                    resolved_mean_psq)
from utils.logger import get_logger

logger = get_logger(module_name="cvdisc")

NORMALIZATION_TOLERANCE = 1e-6
KERNEL_HERMITICITY_TOLERANCE = 1e-10
KERNEL_SPOT_CHECKS = 8


# ============================================================================
# Box quadrature
# ============================================================================

def _box_nodes(edges, nodes):
    """
    Gauss-Legendre nodes and weights mapped onto consecutive intervals.

    Args:
        edges: ascending interval edges, length m + 1
        nodes: nodes per interval

    Returns:
        tuple: (q, w), both of shape (m, nodes)
    """
    x, w = leggauss(nodes)
    lo = edges[:-1, None]
    half = 0.5 * (edges[1:, None] - lo)
    return lo + half * (x[None, :] + 1.0), half * w[None, :]


def _box_integrals(psi, edges, nodes):
    q, w = _box_nodes(edges, nodes)
    return np.sum(w * psi(q), axis=1)


def _refined_box_integrals(psi, edges, nodes):
    """
    Box integrals at `nodes` and `2 * nodes`; the finer estimate is returned.

    Raises:
        NumericalIntegrationError: The two estimates differ by more than the drift limit
    """
    coarse = _box_integrals(psi, edges, nodes)
    fine = _box_integrals(psi, edges, 2 * nodes)
    drift = float(np.max(np.abs(fine - coarse))) if fine.size else 0.0
    if drift > INTEGRATION_DRIFT:
        raise NumericalIntegrationError(
            f"Box quadrature did not converge: drift {drift:.3e} > {INTEGRATION_DRIFT:.1e} "
            f"between {nodes} and {2 * nodes} nodes"
        )
    return fine, drift


# ============================================================================
# Pure states
# ============================================================================

@dataclass(frozen=True)
class PureDiscretization:
    """
    Projection of a pure state onto the box kets.

    amplitudes: Delta^{-1/2} * integral of psi over each box, in label order
    survival: sum |amplitude|^2 (probability mass kept by the projection)
    drift: largest per-box change under node doubling
    """

    amplitudes: np.ndarray
    survival: float
    drift: float

    @property
    def state(self):
        """Renormalised state vector for downstream use."""
        if self.survival < MIN_WINDOW_TRACE:
            raise StateOutsideWindowError(
                f"Projected state has trace {self.survival:.3e} < {MIN_WINDOW_TRACE:.1e}"
            )
        return self.amplitudes / np.sqrt(self.survival)

    def density_matrix(self):
        v = self.state
        return np.outer(v, v.conj())


def discretize_pure(cfg, psi, nodes=GAUSS_NODES):
    """
    Project a wavefunction onto the box kets of cfg.

    Args:
        cfg: DiscretizationConfig
        psi: Wavefunction (or any vectorized callable q -> amplitude)
        nodes: Gauss-Legendre nodes per box

    Returns:
        PureDiscretization: amplitudes, survival and quadrature drift

    Raises:
        NumericalIntegrationError: Node doubling changes a box integral by more than the drift limit
    """
    integrals, drift = _refined_box_integrals(psi, cfg.box_edges(), nodes)
    amplitudes = integrals / np.sqrt(cfg.delta)
    survival = float(np.sum(np.abs(amplitudes) ** 2))
    logger.debug(f"discretize_pure d={cfg.d} survival={survival:.15f} drift={drift:.2e}")
    return PureDiscretization(amplitudes=amplitudes, survival=survival, drift=drift)


# ============================================================================
# Mixed states
# ============================================================================

def _check_kernel_hermitian(cfg, kernel):
    rng = np.random.default_rng(0)
    pts = rng.uniform(-cfg.q_max, cfg.q_max, size=(KERNEL_SPOT_CHECKS, 2))
    q, qp = pts[:, 0], pts[:, 1]
    forward = np.asarray(kernel(q, qp), dtype=np.complex128)
    backward = np.asarray(kernel(qp, q), dtype=np.complex128)
    error = float(np.max(np.abs(forward - np.conj(backward))))
    if error > KERNEL_HERMITICITY_TOLERANCE * max(1.0, float(np.max(np.abs(forward)))):
        raise ParameterError(f"Density kernel is not Hermitian: spot-check error {error:.3e}")


def _box_double_integrals(kernel, edges, nodes):
    q, w = _box_nodes(edges, nodes)
    d = q.shape[0]
    flat_q = q.ravel()
    flat_w = w.ravel()
    out = np.empty((d, d), dtype=np.complex128)
    for i in range(d):
        block = np.asarray(kernel(q[i][:, None], flat_q[None, :]), dtype=np.complex128)
        row = w[i] @ block * flat_w
        out[i] = row.reshape(d, nodes).sum(axis=1)
    return out


def discretize_density(cfg, rho_kernel, nodes=GAUSS_NODES):
    """
    Project a density kernel rho(q, q') onto the box kets:
    entry (i, i') = (1 / Delta) * double integral over box i x box i', renormalised.

    Raises:
        ParameterError: Kernel fails the Hermiticity spot check
        StateOutsideWindowError: Trace before renormalisation below the window limit
        NumericalIntegrationError: Node doubling drift above the limit
    """
    _check_kernel_hermitian(cfg, rho_kernel)
    edges = cfg.box_edges()

    coarse = _box_double_integrals(rho_kernel, edges, nodes)
    fine = _box_double_integrals(rho_kernel, edges, 2 * nodes)
    drift = float(np.max(np.abs(fine - coarse)))
    if drift > INTEGRATION_DRIFT:
        raise NumericalIntegrationError(
            f"Box double quadrature did not converge: drift {drift:.3e} > {INTEGRATION_DRIFT:.1e}"
        )

    rho = fine / cfg.delta
    trace = float(np.trace(rho).real)
    if trace < MIN_WINDOW_TRACE:
        raise StateOutsideWindowError(
            f"Projected density matrix has trace {trace:.3e} < {MIN_WINDOW_TRACE:.1e}"
        )
    rho = rho / trace
    return 0.5 * (rho + rho.conj().T)


# ============================================================================
# Error bounds
# ============================================================================

def projection_bound(cfg, mean_psq):
    """
    Trace-distance bound sqrt((2 / pi) * <p^2> / d) for discretising a state
    with negligible weight outside the window.

    Vacuum (<p^2> = 1/2) at d = 64 gives about 0.07052.

    Raises:
        DomainError: mean_psq < 0
    """
    if mean_psq < 0:
        raise DomainError(f"<p^2> must be non-negative, got {mean_psq}")
    return float(np.sqrt((2.0 / np.pi) * mean_psq / cfg.d))


def projection_bound_photon(cfg, mean_photon_number):
    """Photon-number form sqrt((4 / pi) * (n + 1/2) / d)."""
    if mean_photon_number < 0:
        raise DomainError(f"Mean photon number must be non-negative, got {mean_photon_number}")
    return float(np.sqrt((4.0 / np.pi) * (mean_photon_number + 0.5) / cfg.d))


def survival_loss_bound(cfg, mean_psq):
    """1 - survival <= (Delta^2 / pi^2) <p^2> (box-wise Poincare inequality)."""
    if mean_psq < 0:
        raise DomainError(f"<p^2> must be non-negative, got {mean_psq}")
    return float(cfg.delta ** 2 / np.pi ** 2 * mean_psq)


def check_normalization(cfg, psi):
    """
    Integral of |psi|^2 over the padded window [-q_max - pad, q_max + pad].

    Raises:
        ParameterError: Norm differs from 1 by more than 1e-6
    """
    pad = WINDOW_PADDING
    value = norm_squared(psi, -cfg.q_max - pad, cfg.q_max + pad)
    if abs(value - 1.0) > NORMALIZATION_TOLERANCE:
        raise ParameterError(f"Wavefunction {getattr(psi, 'label', '?')} has norm^2 {value:.9f}, expected 1")
    return value


def _window_norm_squared(cfg, psi, refinement, nodes):
    """Integral of |psi|^2 over [-q_max, q_max), box-wise on a grid `refinement` times finer."""
    m = int(refinement)
    edges = cfg.box_edges()
    fine_edges = np.concatenate([
        edges[0] + (cfg.delta / m) * np.arange(cfg.d * m),
        edges[-1:],
    ])
    q, w = _box_nodes(fine_edges, nodes)
    return float(np.sum(w * np.abs(psi(q)) ** 2))


def _continuum_distance(coarse, window_norm):
    """
    Trace distance between the renormalised box state and the normalised
    window restriction of psi.

    The box kets are orthonormal indicators, so <box_j|psi> is amplitude_j and
    the squared overlap of the two pure states is survival / window_norm.
    """
    if window_norm < MIN_WINDOW_TRACE:
        raise StateOutsideWindowError(f"Window restriction has trace {window_norm:.3e}")
    return float(np.sqrt(max(0.0, 1.0 - coarse.survival / window_norm)))


@dataclass
class DiscretizationRecord:
    """Discretisation error measurements for one test state."""

    label: str
    d: int
    mean_psq: float
    survival: float
    survival_bound: float
    bound: float
    measured_distance: float
    gentle_distance: float
    integration_drift: float
    surrogate_drift: float
    extra: dict = field(default_factory=dict)

    @property
    def passed(self):
        return (
            1.0 - self.survival <= self.survival_bound + 1e-12
            and self.measured_distance <= self.bound
            and self.gentle_distance <= self.bound
            and self.surrogate_drift <= SURROGATE_DRIFT
        )

    def to_dict(self):
        return {
            'state': self.label,
            'd': self.d,
            'mean_psq': self.mean_psq,
            'survival': self.survival,
            'one_minus_survival': 1.0 - self.survival,
            'survival_bound': self.survival_bound,
            'bound': self.bound,
            'measured_distance': self.measured_distance,
            'gentle_distance': self.gentle_distance,
            'integration_drift': self.integration_drift,
            'surrogate_drift': self.surrogate_drift,
            'passed': self.passed,
            **self.extra,
        }


def discretization_check(cfg, psi, nodes=GAUSS_NODES, refinement=SURROGATE_REFINEMENT):
    """
    Measure the discretisation error of psi against the projection bound.

    measured_distance compares the renormalised box state with the window
    restriction of psi, whose norm is integrated on a `refinement`-times finer
    grid; surrogate_drift is the change of that distance when the fine grid
    is doubled again.
    gentle_distance is sqrt(1 - survival).

    Returns:
        DiscretizationRecord
    """
    check_normalization(cfg, psi)
    mean_psq = resolved_mean_psq(psi)
    coarse = discretize_pure(cfg, psi, nodes)

    measured = _continuum_distance(coarse, _window_norm_squared(cfg, psi, refinement, nodes))
    measured_finer = _continuum_distance(coarse, _window_norm_squared(cfg, psi, 2 * refinement, nodes))

    record = DiscretizationRecord(
        label=getattr(psi, 'label', 'custom'),
        d=cfg.d,
        mean_psq=mean_psq,
        survival=coarse.survival,
        survival_bound=survival_loss_bound(cfg, mean_psq),
        bound=projection_bound(cfg, mean_psq),
        measured_distance=measured,
        gentle_distance=float(np.sqrt(max(0.0, 1.0 - coarse.survival))),
        integration_drift=coarse.drift,
        surrogate_drift=abs(measured_finer - measured),
    )
    logger.info(
        f"Discretisation check {record.label} d={cfg.d}: distance {record.measured_distance:.6f} "
        f"<= bound {record.bound:.6f}: {record.passed}"
    )
    return record


def mixture_distance(cfg, components, nodes=GAUSS_NODES):
    """
    Trace distance between the discretised mixture kernel and the mixture of
    discretised pure states (zero up to quadrature error by linearity).
    """
    components = list(components)
    direct = discretize_density(cfg, mixture_kernel(components), nodes)

    # Linearity holds before renormalisation
    unnormalised = sum(
        w * np.outer(p.amplitudes, p.amplitudes.conj())
        for w, p in ((w, discretize_pure(cfg, psi, nodes)) for w, psi in components)
    )
    mixed = unnormalised / np.trace(unnormalised).real
    return trace_distance(direct, mixed)


# ============================================================================
# Staircase phase profile
# ============================================================================

@dataclass
class StaircaseProfile:
    """Sampled phase profile of a boxed Q-unitary, optionally with a polynomial fit."""

    data: pd.DataFrame
    fit_degree: int = None
    max_deviation: float = None
    coefficients: list = None

    def to_dict(self):
        return {
            'samples': int(len(self.data)),
            'fit_degree': self.fit_degree,
            'max_deviation': self.max_deviation,
            'coefficients': self.coefficients,
        }


def staircase_profile(cfg, alpha, beta, samples_per_box, fit_degree=None, wrap=False):
    """
    Sample the phase 2 pi (alpha i + beta i^2) / d of box i at
    `samples_per_box` midpoints per box over [-q_max, q_max).

    Args:
        cfg: DiscretizationConfig
        alpha, beta: phase parameters
        samples_per_box: samples per box, >= 1
        fit_degree: optional polynomial degree; the fit is least squares over
            the samples, so a degree-0 fit is the sample mean and its max
            deviation equals half the phase range only for profiles symmetric
            about that mean
        wrap: reduce phases into [-pi, pi)

    Returns:
        StaircaseProfile: DataFrame with columns q, box, phase[, fit]

    Raises:
        ParameterError: samples_per_box < 1, non-finite alpha or beta, or negative fit degree
    """
    if isinstance(samples_per_box, bool) or int(samples_per_box) != samples_per_box or samples_per_box < 1:
        raise ParameterError(f"samples_per_box must be a positive integer, got {samples_per_box!r}")
    if not (np.isfinite(alpha) and np.isfinite(beta)):
        raise ParameterError(f"Phase parameters must be finite, got alpha={alpha}, beta={beta}")
    m = int(samples_per_box)

    k = np.arange(cfg.d * m)
    q = -cfg.q_max + (k + 0.5) * cfg.delta / m
    box = cfg.box_label_of(q)
    phase = 2.0 * np.pi * (alpha * box + beta * box.astype(np.float64) ** 2) / cfg.d
    if wrap:
        phase = np.mod(phase + np.pi, 2.0 * np.pi) - np.pi

    data = pd.DataFrame({'q': q, 'box': box, 'phase': phase})
    profile = StaircaseProfile(data=data)

    if fit_degree is not None:
        if int(fit_degree) < 0:
            raise ParameterError(f"Fit degree must be non-negative, got {fit_degree}")
        poly = Polynomial.fit(q, phase, int(fit_degree))
        fitted = poly(q)
        data['fit'] = fitted
        profile.fit_degree = int(fit_degree)
        profile.max_deviation = float(np.max(np.abs(fitted - phase)))
        profile.coefficients = [float(c) for c in poly.convert().coef]

    return profile
