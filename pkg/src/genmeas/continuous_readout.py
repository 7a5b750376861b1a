"""Thresholded continuous readout realization of a partial projection.

A dispersive qubit readout accumulates a dimensionless integrated signal R
whose value alone fixes the (purity-preserving) back-action operator

    M_R = e^{R/2} e^{-i(R/2)tan(alpha)} |0><0| + e^{-R/2} e^{+i(R/2)tan(alpha)} |1><1|

up to an overall constant that cancels on renormalization. Setting an upper
threshold R0 >= 0 and a lower threshold R1 <= 0 and stopping the measurement
at the first crossing realizes the partial projection pair D0, D1 with

    R0 = (1/2) ln(p / (1 - q)),    R1 = -(1/2) ln(q / (1 - p)).

The simulator uses a discrete-time quantum Bayesian model: per step the
readout increment is drawn from the population-weighted Gaussian mixture
rho00 * N(+dt/tau, dt/tau) + rho11 * N(-dt/tau, dt/tau), which reproduces
the likelihood ratio e^{2R} implied by M_R. Because increments compose
exactly through the diagonal exponentials, the populations depend only on
the accumulated R, and the final state follows in closed form from
(final_R, duration).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidOrdering, MaxDurationExceeded, NonFiniteThreshold
from .linalg import adjoint
from .partial_projection import PartialProjParams, validate_state

LOCALIZATION_TOL = 1e-6


@dataclass(frozen=True)
class ReadoutConfig:
    """Parameters of the continuous-readout simulator.

    ``tau_min`` is the measurement time at quadrature angle alpha = 0; the
    effective timescale is tau_min / cos^2(alpha). ``dt`` defaults to
    tau_min / 100. ``efficiency`` is the quantum efficiency eta in (0, 1];
    eta < 1 adds dephasing. ``max_duration`` defaults to 1e6 * dt.
    """

    tau_min: float
    seed: int
    alpha: float = 0.0
    dt: float | None = None
    efficiency: float = 1.0
    max_duration: float | None = None

    def __post_init__(self):
        if self.tau_min <= 0:
            raise ValueError("tau_min must be positive")
        if not abs(self.alpha) < math.pi / 2:
            raise ValueError("|alpha| must be strictly below pi/2")
        if not (0.0 < self.efficiency <= 1.0):
            raise ValueError("efficiency must be in (0, 1]")
        if self.dt is None:
            object.__setattr__(self, "dt", self.tau_min / 100.0)
        if self.dt <= 0:
            raise ValueError("dt must be positive")

    @property
    def tau(self) -> float:
        """Effective measurement time tau_min / cos^2(alpha)."""
        return self.tau_min / math.cos(self.alpha) ** 2

    @property
    def duration_cap(self) -> float:
        return self.max_duration if self.max_duration is not None else 1e6 * self.dt


@dataclass(frozen=True)
class Thresholds:
    """Integrated-readout stopping thresholds, R0 >= 0 >= R1.

    Infinite values are represented explicitly (projective limits) and are
    rejected by the trajectory simulator.
    """

    R0: float
    R1: float

    def __post_init__(self):
        if not self.R0 >= 0.0:
            raise ValueError(f"R0 must be >= 0, got {self.R0}")
        if not self.R1 <= 0.0:
            raise ValueError(f"R1 must be <= 0, got {self.R1}")

    @property
    def finite(self) -> bool:
        return math.isfinite(self.R0) and math.isfinite(self.R1)


@dataclass
class TrajectoryRecord:
    """One stochastic readout run terminated at a threshold."""

    outcome: int
    duration: float
    final_R: float
    final_state: np.ndarray
    purity: float
    r_path: list[float] = field(default_factory=list)


def thresholds_from_pq(params: PartialProjParams) -> Thresholds:
    """Thresholds realizing the partial projection with fidelities (p, q).

    Projective limits are flagged by explicit infinities (q = 1 gives
    R0 = +inf, p = 1 gives R1 = -inf). Requires p + q >= 1 so that the
    thresholds have the right signs.
    """
    p, q = params.p, params.q
    if p <= 0.0 or q <= 0.0:
        raise InvalidOrdering(f"thresholds require p, q in (0, 1], got ({p}, {q})")
    if p + q < 1.0:
        raise InvalidOrdering(
            f"p + q = {p + q} < 1: the outcome roles are swapped; "
            "relabel outcomes so that p + q >= 1"
        )
    r0 = math.inf if q == 1.0 else 0.5 * math.log(p / (1.0 - q))
    r1 = -math.inf if p == 1.0 else -0.5 * math.log(q / (1.0 - p))
    # p + q >= 1 guarantees the signs; snap log round-off (p + q = 1 cases)
    # onto the boundary so the Thresholds invariant holds exactly.
    if math.isfinite(r0):
        r0 = max(r0, 0.0)
    if math.isfinite(r1):
        r1 = min(r1, 0.0)
    return Thresholds(R0=r0, R1=r1)


def pq_from_thresholds(t: Thresholds) -> PartialProjParams:
    """Invert :func:`thresholds_from_pq` for finite thresholds.

    The degenerate no-measurement case R0 = R1 = 0 maps to the convention
    p = q = 1/2.
    """
    if not t.finite:
        raise NonFiniteThreshold("cannot invert infinite thresholds")
    if t.R0 == 0.0 and t.R1 == 0.0:
        return PartialProjParams(0.5, 0.5)
    e0 = math.exp(2.0 * t.R0)
    e1 = math.exp(2.0 * t.R1)
    q = (e0 - 1.0) / (e0 - e1)
    p = e0 * (1.0 - q)
    return PartialProjParams(min(p, 1.0), min(q, 1.0))


def measurement_operator(R: float, alpha: float = 0.0) -> np.ndarray:
    """Back-action operator for an integrated readout R at quadrature angle alpha.

    Unnormalized: the constant proportionality factor cancels on state
    renormalization.
    """
    if not abs(alpha) < math.pi / 2:
        raise ValueError("|alpha| must be strictly below pi/2")
    phase = (R / 2.0) * math.tan(alpha)
    return np.diag(
        [
            math.exp(R / 2.0) * np.exp(-1j * phase),
            math.exp(-R / 2.0) * np.exp(1j * phase),
        ]
    ).astype(np.complex128)


def normalization_constants(params: PartialProjParams) -> tuple[float, float]:
    """Constants (C0, C1) with sqrt(C_k) e^{+-R_k/2} matching the D_k diagonals."""
    p, q = params.p, params.q
    return math.sqrt(p * (1.0 - q)), math.sqrt(q * (1.0 - p))


def _final_record(
    rho: np.ndarray,
    R: float,
    duration: float,
    outcome: int,
    config: ReadoutConfig,
    r_path: list[float],
) -> TrajectoryRecord:
    m = measurement_operator(R, config.alpha)
    out = m @ rho @ adjoint(m)
    eta = config.efficiency
    if eta < 1.0:
        decay = math.exp(-(1.0 - eta) / (2.0 * eta) * duration / config.tau)
        out[0, 1] *= decay
        out[1, 0] *= decay
    out = out / np.trace(out).real
    purity = float(np.trace(out @ out).real)
    return TrajectoryRecord(
        outcome=outcome,
        duration=duration,
        final_R=R,
        final_state=out,
        purity=purity,
        r_path=r_path,
    )


def _run_walk(
    rng: np.random.Generator,
    w0: float,
    t: Thresholds,
    config: ReadoutConfig,
    record_path: bool,
) -> tuple[int, float, float, list[float]]:
    """First-passage walk of the integrated readout; returns (outcome, R, T, path).

    Steps advance on a fixed grid of size dt. Stopping uses exact
    first-passage detection: a step whose endpoint lands beyond a threshold
    is absorbed there, and a step that stays inside is absorbed with the
    Brownian-bridge excursion probability exp(-2 g g' tau / dt), where g and
    g' are the distances to the threshold at the step ends. The bridge law
    is drift-free, so the correction is exact for the population-weighted
    mixture as well, and the stopped record satisfies R = R0 or R = R1
    exactly (well within LOCALIZATION_TOL).
    """
    tau = config.tau
    dt = config.dt
    cap = config.duration_cap
    r0, r1 = t.R0, t.R1
    R = 0.0
    T = 0.0
    path = [0.0] if record_path else []
    # Chunked draws: one normal and two uniforms per step (mixture branch
    # and bridge-crossing decision).
    chunk = 256
    normals = rng.standard_normal(chunk)
    uniforms = rng.random((chunk, 2))
    idx = 0
    m = dt / tau
    s = math.sqrt(m)
    two_over = 2.0 * tau / dt
    max_steps = int(cap / dt) + 1
    steps = 0
    while True:
        if idx == chunk:
            normals = rng.standard_normal(chunk)
            uniforms = rng.random((chunk, 2))
            idx = 0
        sign = 1.0 if uniforms[idx, 0] < w0 else -1.0
        dR = sign * m + s * normals[idx]
        newR = R + dR
        if newR >= r0:
            if record_path:
                path.append(r0)
            return 0, r0, T + dt, path
        if newR <= r1:
            if record_path:
                path.append(r1)
            return 1, r1, T + dt, path
        # Endpoint stayed inside: the continuous record may still have
        # touched a threshold during the step.
        xu = -two_over * (r0 - R) * (r0 - newR)
        xd = -two_over * (R - r1) * (newR - r1)
        if xu > -30.0 or xd > -30.0:
            pu = math.exp(xu)
            pd = math.exp(xd)
            u = uniforms[idx, 1]
            if u < pu:
                if record_path:
                    path.append(r0)
                return 0, r0, T + dt, path
            if u < pu + pd:
                if record_path:
                    path.append(r1)
                return 1, r1, T + dt, path
        idx += 1
        R = newR
        T += dt
        e = math.exp(2.0 * dR)
        w0 = (w0 * e) / (w0 * e + (1.0 - w0))
        if record_path:
            path.append(R)
        steps += 1
        if T > cap or steps > max_steps:
            raise MaxDurationExceeded(
                f"no threshold reached within duration cap {cap:.3e}"
            )


def simulate_trajectory(
    config: ReadoutConfig,
    t: Thresholds,
    initial: np.ndarray,
    rng: np.random.Generator | None = None,
    record_path: bool = True,
) -> TrajectoryRecord:
    """Simulate one thresholded-readout run from ``initial``.

    Deterministic given (config, thresholds, initial): the generator is
    derived from ``config.seed`` unless one is supplied explicitly.
    """
    if not t.finite:
        raise NonFiniteThreshold(
            f"thresholds ({t.R0}, {t.R1}) are not finite; the projective "
            "limit can only be approximated"
        )
    rho = validate_state(initial)
    if rng is None:
        rng = np.random.default_rng(config.seed)

    if t.R0 == 0.0 and t.R1 == 0.0:
        # No measurement: terminate immediately, outcome split per the
        # p = q = 1/2 convention.
        params = pq_from_thresholds(t)
        outcome = 0 if rng.random() < params.p else 1
        return _final_record(rho, 0.0, 0.0, outcome, config, [0.0])
    if t.R0 == 0.0:
        return _final_record(rho, 0.0, 0.0, 0, config, [0.0])
    if t.R1 == 0.0:
        return _final_record(rho, 0.0, 0.0, 1, config, [0.0])

    w0 = float(rho[0, 0].real)
    outcome, R, T, path = _run_walk(rng, w0, t, config, record_path)
    return _final_record(rho, R, T, outcome, config, path)


def simulate_batch(
    config: ReadoutConfig,
    t: Thresholds,
    initial: np.ndarray,
    n: int,
    record_paths: bool = False,
) -> list[TrajectoryRecord]:
    """Simulate ``n`` independent trajectories.

    Trajectory ``i`` uses a generator seeded from (config.seed, i), so a
    batch is reproducible and its members are order-independent.
    """
    out = []
    for i in range(n):
        rng = np.random.default_rng([config.seed, i])
        out.append(
            simulate_trajectory(config, t, initial, rng=rng, record_path=record_paths)
        )
    return out


def trajectories_to_jsonl(records: list[TrajectoryRecord]) -> str:
    """Serialize a batch as JSON lines, one record per trajectory."""
    lines = []
    for r in records:
        state = [[[c.real, c.imag] for c in row] for row in r.final_state]
        lines.append(
            json.dumps(
                {
                    "outcome": r.outcome,
                    "duration": r.duration,
                    "final_R": r.final_R,
                    "final_state": state,
                    "purity": r.purity,
                }
            )
        )
    return "\n".join(lines) + "\n"
