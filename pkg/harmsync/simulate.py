"""Time-domain integration of ``M_a x'' + B x' + K_a x = 0``.

The simulator corroborates spectral verdicts; it is never the primary
verdict. Integration is fixed-step classical Runge-Kutta so golden runs are
reproducible bit for bit.
"""

import math
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from .config import (
    CLASSIFY_FLOOR,
    MIN_PERIODS,
    PERSISTENT_RATIO,
    STABILITY_FACTOR,
    SYNC_RATIO,
)
from .exceptions import ConfigError, DimensionError, DivergenceError, PreconditionError
from .linalg import spd_inv_sqrt, sym_eig
from .models import KernelWitness, NetworkSpec, SimConfig, Trajectory, TrajectoryClass
from .utils import logger, time_operation


def max_pencil_frequency(net: NetworkSpec) -> float:
    """Largest ``omega`` with ``K_a xi = omega^2 M_a xi``."""
    ma, ka = net.augmented()
    s = spd_inv_sqrt(ma)
    r = s @ ka @ s
    values, _ = sym_eig(0.5 * (r + r.T))
    return math.sqrt(float(values[-1]))


def make_sim_config(net: NetworkSpec, dt: Optional[float] = None, t_end: float = 2000.0,
                    record_stride: int = 1) -> SimConfig:
    """Validated settings with ``dt * omega_max <= 0.05``.

    A larger ``dt`` is shrunk to the cap (with a warning); ``dt`` is then
    adjusted down so that a whole number of steps lands on ``t_end``.
    """
    if not math.isfinite(t_end) or t_end <= 0.0:
        raise ConfigError(f"t_end must be positive, got {t_end}")
    if isinstance(record_stride, bool) or int(record_stride) != record_stride or record_stride < 1:
        raise ConfigError(f"record_stride must be a positive integer, got {record_stride}")
    if dt is not None and (not math.isfinite(dt) or dt <= 0.0):
        raise ConfigError(f"dt must be positive, got {dt}")

    dt_cap = STABILITY_FACTOR / max_pencil_frequency(net)
    if dt is None:
        dt = dt_cap
    elif dt > dt_cap:
        logger.warning(f"dt={dt:g} exceeds the stability cap; using dt={dt_cap:.6g}")
        dt = dt_cap
    dt = min(dt, t_end)

    n_steps = max(1, math.ceil(t_end / dt - 1e-9))
    return SimConfig(dt=t_end / n_steps, t_end=float(t_end), record_stride=int(record_stride))


def _as_state(net: NetworkSpec, vector: Sequence[float], name: str) -> np.ndarray:
    state = np.asarray(vector, dtype=float)
    if state.shape != (net.q,):
        raise DimensionError(f"{name} must have length {net.q}, got shape {state.shape}")
    return state


def energy(net: NetworkSpec, x: Sequence[float], v: Sequence[float]) -> float:
    """``V = x^T K_a x / 2 + v^T M_a v / 2``."""
    x = _as_state(net, x, "x")
    v = _as_state(net, v, "v")
    ma, ka = net.augmented()
    return float(0.5 * x @ ka @ x + 0.5 * v @ ma @ v)


def disagreement(x: Sequence[float]) -> float:
    """Largest pairwise position gap."""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise DimensionError("disagreement needs at least one node")
    return float(x.max() - x.min())


@time_operation("simulate")
def simulate(net: NetworkSpec, x0: Sequence[float], v0: Sequence[float], cfg: SimConfig,
             progress: bool = False) -> Trajectory:
    """Integrate the network from ``(x0, v0)`` with fixed-step RK4.

    Raises:
        DivergenceError: the state became non-finite.
    """
    x = _as_state(net, x0, "x0").copy()
    v = _as_state(net, v0, "v0").copy()
    _, b, _ = net.laplacians()
    ma, ka = net.augmented()

    # M_a is constant: invert it once through its eigendecomposition
    w, basis = sym_eig(ma)
    ma_inv = (basis.vectors / w) @ basis.vectors.T
    damping = ma_inv @ b
    stiffness = ma_inv @ ka

    def accel(pos: np.ndarray, vel: np.ndarray) -> np.ndarray:
        return -(damping @ vel + stiffness @ pos)

    dt = cfg.dt
    n_steps = cfg.n_steps
    stride = cfg.record_stride
    steps = [k for k in range(0, n_steps + 1, stride)]
    if steps[-1] != n_steps:
        steps.append(n_steps)
    positions = np.empty((len(steps), net.q))
    velocities = np.empty((len(steps), net.q))
    positions[0], velocities[0] = x, v
    record = 1

    for step in tqdm(range(1, n_steps + 1), desc="simulate", unit="step",
                     disable=not progress, leave=False):
        k1x, k1v = v, accel(x, v)
        k2x, k2v = v + 0.5 * dt * k1v, accel(x + 0.5 * dt * k1x, v + 0.5 * dt * k1v)
        k3x, k3v = v + 0.5 * dt * k2v, accel(x + 0.5 * dt * k2x, v + 0.5 * dt * k2v)
        k4x, k4v = v + dt * k3v, accel(x + dt * k3x, v + dt * k3v)
        x = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        v = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)

        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
            raise DivergenceError(f"State became non-finite at t={step * dt:.6g} with dt={dt:.6g}; reduce dt")
        if record < len(steps) and step == steps[record]:
            positions[record], velocities[record] = x, v
            record += 1

    times = np.array(steps, dtype=float) * dt
    energies = 0.5 * np.einsum("ti,ij,tj->t", positions, ka, positions) \
        + 0.5 * np.einsum("ti,ij,tj->t", velocities, ma, velocities)
    return Trajectory(
        times=times,
        positions=positions,
        velocities=velocities,
        energy=energies,
        disagreement=positions.max(axis=1) - positions.min(axis=1),
        dt=dt,
        omega0=net.omega0,
    )


def _window_maxima(traj: Trajectory) -> Tuple[float, float]:
    t_end = traj.t_end
    early = traj.disagreement[traj.times <= 0.25 * t_end]
    late = traj.disagreement[traj.times >= 0.75 * t_end]
    return float(early.max()), float(late.max())


def disagreement_ratio(traj: Trajectory) -> float:
    """``W_late / W_early``; zero when the run never leaves consensus."""
    w_early, w_late = _window_maxima(traj)
    floor = CLASSIFY_FLOOR * (1.0 + float(np.max(np.abs(traj.positions))))
    if w_early <= floor:
        return 0.0 if w_late <= floor else math.inf
    return w_late / w_early


def classify_trajectory(traj: Trajectory) -> TrajectoryClass:
    """Compare the largest disagreement in the first and last quarter of the run.

    Raises:
        PreconditionError: the run covers fewer than 20 uncoupled periods.
    """
    period = 2.0 * math.pi / traj.omega0
    if traj.t_end < MIN_PERIODS * period * (1.0 - 1e-12):
        raise PreconditionError(
            f"Horizon {traj.t_end:g} s is shorter than {MIN_PERIODS} uncoupled periods ({MIN_PERIODS * period:g} s)"
        )
    ratio = disagreement_ratio(traj)
    if ratio <= SYNC_RATIO:
        return TrajectoryClass.SYNC_TRENDING
    if ratio >= PERSISTENT_RATIO:
        return TrajectoryClass.PERSISTENT
    logger.warning(f"Trajectory inconclusive: W_late/W_early = {ratio:.3f}")
    return TrajectoryClass.INCONCLUSIVE


def witness_initial_state(witness: KernelWitness) -> Tuple[np.ndarray, np.ndarray]:
    """``(Re xi, Re(j omega xi))``, the state at ``t = 0`` of the witness mode."""
    return np.real(witness.xi).copy(), np.real(1j * witness.omega * witness.xi)


def witness_mode(witness: KernelWitness, times: Union[float, Sequence[float]]) -> np.ndarray:
    """Closed-form persistent solution ``Re(exp(j omega t) xi)``; one row per time."""
    t = np.atleast_1d(np.asarray(times, dtype=float))
    return np.real(np.exp(1j * witness.omega * t)[:, None] * witness.xi[None, :])


def write_trajectory_csv(traj: Trajectory, path: Union[str, Path], digits: int = 17) -> None:
    """CSV with header ``t,x1..xq,v1..vq,V,d``, one row per recorded sample."""
    q = traj.positions.shape[1]
    header = ["t"] + [f"x{i}" for i in range(1, q + 1)] + [f"v{i}" for i in range(1, q + 1)] + ["V", "d"]
    fmt = f"{{:.{digits}g}}".format
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for k in range(len(traj.times)):
            row = [traj.times[k], *traj.positions[k], *traj.velocities[k], traj.energy[k], traj.disagreement[k]]
            f.write(",".join(fmt(float(value)) for value in row) + "\n")
