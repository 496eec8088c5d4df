class HarmsyncError(Exception):
    """Base class for harmsync errors."""
    pass

class GraphValidationError(HarmsyncError):
    """Invalid coupling graph."""
    pass

class DimensionError(HarmsyncError):
    """Node count or vector length mismatch."""
    pass

class NumericalFailure(HarmsyncError):
    """An iterative kernel did not converge."""
    pass

class DomainError(HarmsyncError):
    """Argument outside the mathematical domain of an operation."""
    pass

class StructuralError(HarmsyncError):
    """Coupling graphs lack the structure a test requires."""
    pass

class ConsistencyError(HarmsyncError):
    """Independent synchronization tests disagree."""
    pass

class ConfigError(HarmsyncError):
    """Invalid configuration or simulation settings."""
    pass

class DivergenceError(HarmsyncError):
    """Integration produced a non-finite state."""
    pass

class PreconditionError(HarmsyncError):
    """Input does not meet the precondition of an operation."""
    pass

class NetlistError(HarmsyncError):
    """Invalid RLC netlist."""
    pass

class SchemaError(HarmsyncError):
    """JSON document does not match the expected schema."""
    pass
