from .analysis import analyze, kernel_oracle, structure_report
from .config import HarmsyncConfig, DEFAULT_CONFIG, load_config
from .graphs import CouplingGraph, Edge
from .models import (
    NetworkSpec,
    Spectrum,
    SyncMethod,
    SyncVerdict,
    KernelWitness,
    StructureReport,
    AnalysisReport,
    Trajectory,
    TrajectoryClass,
    Netlist
)
from .exceptions import (
    HarmsyncError,
    GraphValidationError,
    DimensionError,
    NumericalFailure,
    DomainError,
    StructuralError,
    ConsistencyError,
    ConfigError,
    DivergenceError,
    PreconditionError,
    NetlistError,
    SchemaError
)

__version__ = "1.0.0"
__all__ = [
    'analyze',
    'kernel_oracle',
    'structure_report',
    'HarmsyncConfig',
    'DEFAULT_CONFIG',
    'load_config',
    'CouplingGraph',
    'Edge',
    'NetworkSpec',
    'Spectrum',
    'SyncMethod',
    'SyncVerdict',
    'KernelWitness',
    'StructureReport',
    'AnalysisReport',
    'Trajectory',
    'TrajectoryClass',
    'Netlist',
    'HarmsyncError',
    'GraphValidationError',
    'DimensionError',
    'NumericalFailure',
    'DomainError',
    'StructuralError',
    'ConsistencyError',
    'ConfigError',
    'DivergenceError',
    'PreconditionError',
    'NetlistError',
    'SchemaError'
]
