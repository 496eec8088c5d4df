import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from .exceptions import ConfigError, DimensionError, DomainError
from .graphs import CouplingGraph, laplacian


@dataclass(frozen=True)
class NetworkSpec:
    """Identical oscillators ``m0 x'' + k0 x = 0`` under inertial, dissipative and restorative coupling."""
    inertial: CouplingGraph
    dissipative: CouplingGraph
    restorative: CouplingGraph
    m0: float
    k0: float

    def __post_init__(self):
        sizes = {self.inertial.q, self.dissipative.q, self.restorative.q}
        if len(sizes) != 1:
            raise DimensionError(f"Coupling graphs disagree on node count: {sorted(sizes)}")
        for name in ("m0", "k0"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value <= 0.0:
                raise DomainError(f"{name} must be positive and finite, got {value}")
            object.__setattr__(self, name, value)

    @property
    def q(self) -> int:
        return self.inertial.q

    @property
    def omega0(self) -> float:
        return math.sqrt(self.k0 / self.m0)

    def with_parameters(self, m0: Optional[float] = None, k0: Optional[float] = None) -> "NetworkSpec":
        return replace(
            self,
            m0=self.m0 if m0 is None else m0,
            k0=self.k0 if k0 is None else k0,
        )

    def laplacians(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """The Laplacians ``(M, B, K)``."""
        return laplacian(self.inertial), laplacian(self.dissipative), laplacian(self.restorative)

    def augmented(self) -> Tuple[np.ndarray, np.ndarray]:
        """``(M_a, K_a) = (M + m0 I, K + k0 I)``."""
        eye = np.eye(self.q)
        return laplacian(self.inertial) + self.m0 * eye, laplacian(self.restorative) + self.k0 * eye


@dataclass(frozen=True)
class OrthonormalBasis:
    """Orthonormal vectors stored as the columns of a ``q x k`` array."""
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def q(self) -> int:
        return self.vectors.shape[0]

    def gram_error(self) -> float:
        gram = self.vectors.conj().T @ self.vectors
        return float(np.max(np.abs(gram - np.eye(self.dim)), initial=0.0))

    def projector(self) -> np.ndarray:
        return self.vectors @ self.vectors.conj().T


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues ordered by (Re, |Im|, Im), 1-based.

    ``values`` have real parts inside ``(-zero_tol, zero_tol)`` set to exactly
    zero; ``raw`` keeps the unclassified eigenvalues in the same order.
    """
    values: np.ndarray
    raw: np.ndarray
    zero_tol: float
    residuals: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.values)

    def nth(self, index: int) -> complex:
        if not 1 <= index <= len(self.values):
            raise IndexError(f"Eigenvalue index {index} out of range 1..{len(self.values)}")
        return complex(self.values[index - 1])

    def raw_nth(self, index: int) -> complex:
        if not 1 <= index <= len(self.raw):
            raise IndexError(f"Eigenvalue index {index} out of range 1..{len(self.raw)}")
        return complex(self.raw[index - 1])

    @property
    def max_residual(self) -> float:
        if self.residuals is None or not len(self.residuals):
            return 0.0
        return float(np.max(self.residuals))


@dataclass(frozen=True)
class ComplexLaplacian:
    """``Lambda = D + jR - j omega0^2 I`` with its real symmetric factors."""
    matrix: np.ndarray
    d: np.ndarray
    r: np.ndarray
    omega0_sq: float
    inv_sqrt_ma: np.ndarray


class SyncMethod(str, Enum):
    GENERAL = "general"
    VELOCITY_ONLY = "velocity_only"
    POSITION_VELOCITY = "position_velocity"
    EDGE_ISOLATED = "edge_isolated"
    ACCEL_VELOCITY = "accel_velocity"
    CONNECTED_B_SUFFICIENT = "connected_B_sufficient"


@dataclass(frozen=True)
class SyncVerdict:
    """Outcome of one second-eigenvalue test.

    ``conclusive`` is false only for the sufficient-condition test when its
    hypothesis fails; ``lambda2`` and margins are ``None`` for one node.
    """
    synchronizes: bool
    spectrum: Spectrum
    lambda2: Optional[complex]
    margin: Optional[float]
    method: SyncMethod
    raw_margin: Optional[float] = None
    parameter_dependent: bool = False
    conclusive: bool = True


@dataclass(frozen=True)
class KernelWitness:
    """A persistent non-synchronous mode ``Re(exp(j omega t) xi)``."""
    omega: float
    xi: np.ndarray
    mu: float
    residual_pencil: float
    residual_b: float
    distance_from_consensus: float


@dataclass(frozen=True)
class StructureReport:
    b_connected: bool
    m_connected: bool
    k_connected: bool
    union_connected: bool
    m_k_edge_isolated: bool
    applicable_tests: Tuple[SyncMethod, ...]
    recommendation: SyncMethod


@dataclass(frozen=True)
class AnalysisReport:
    network: NetworkSpec
    structure: StructureReport
    verdicts: List[SyncVerdict]
    spectrum: Spectrum
    witness: Optional[KernelWitness] = None

    @property
    def general(self) -> SyncVerdict:
        return self.verdict(SyncMethod.GENERAL)

    def verdict(self, method: SyncMethod) -> SyncVerdict:
        for verdict in self.verdicts:
            if verdict.method == method:
                return verdict
        raise KeyError(method)

    @property
    def synchronizes(self) -> bool:
        return self.general.synchronizes


@dataclass(frozen=True)
class SimConfig:
    """Fixed-step integration settings; build with ``simulate.make_sim_config``."""
    dt: float
    t_end: float
    record_stride: int = 1

    def __post_init__(self):
        if not math.isfinite(self.t_end) or self.t_end <= 0.0:
            raise ConfigError(f"t_end must be positive, got {self.t_end}")
        if not math.isfinite(self.dt) or self.dt <= 0.0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.dt > self.t_end:
            raise ConfigError(f"dt={self.dt:g} exceeds t_end={self.t_end:g}")
        stride = self.record_stride
        if isinstance(stride, bool) or int(stride) != stride or stride < 1:
            raise ConfigError(f"record_stride must be a positive integer, got {stride}")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    energy: np.ndarray
    disagreement: np.ndarray
    dt: float
    omega0: float

    @property
    def t_end(self) -> float:
        return float(self.times[-1])


class TrajectoryClass(str, Enum):
    SYNC_TRENDING = "sync_trending"
    PERSISTENT = "persistent"
    INCONCLUSIVE = "inconclusive"


class CouplerKind(str, Enum):
    CAPACITOR = "C"
    RESISTOR = "R"
    INDUCTOR = "L"


@dataclass(frozen=True)
class Tank:
    """LC tank: capacitance ``c0`` (F) and inductance ``l0`` (H)."""
    c0: float
    l0: float


@dataclass(frozen=True)
class Coupler:
    """Two-terminal coupling element; ``value`` in F, Ohm or H by ``kind``."""
    kind: CouplerKind
    i: int
    j: int
    value: float


@dataclass(frozen=True)
class Netlist:
    q: int
    tank: Tank
    couplers: Tuple[Coupler, ...] = field(default_factory=tuple)
