import enum

# Constants
DEFAULT_ENUMERATION_CAP = 1_000_000
DEFAULT_BRUTEFORCE_VERTEX_CAP = 20
DEFAULT_VANDERMONDE_CAP = 64
DEFAULT_SAMPLE_RANGE = 10**6
DEFAULT_DECISION_DEGREE = 8
DEFAULT_COUNTING_DEGREE = 18

# Environment variables
THREADS_ENV_VAR = "HWV_THREADS"
LOG_LEVEL_ENV_VAR = "HWV_LOG_LEVEL"

# Exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_CROSS_CHECK = 4


class FieldKind(str, enum.Enum):
    RATIONAL = "rational"
    ZETA6 = "zeta6"


class Method(str, enum.Enum):
    NAIVE = "naive"
    ABP = "abp"
    TREEWIDTH = "treewidth"
    ALL = "all"
    SHORTCUT = "shortcut"


class OutputFormat(str, enum.Enum):
    JSON = "json"
    PRETTY = "pretty"


class HwvError(ValueError):
    """Base class for every error raised by the hwv package."""


class ParseError(HwvError):
    """Malformed input file or wire value."""


class PreconditionError(HwvError):
    """A semantic precondition of an operation does not hold."""


class FieldMismatchError(PreconditionError):
    """Scalars from different fields met in one computation."""


class CapExceededError(PreconditionError):
    """An exhaustive enumeration grew past its configured cap."""


class CrossCheckError(HwvError):
    """Two evaluators disagreed on the same input."""


class LayeredGraphError(PreconditionError):
    def __init__(self, property_index: int, message: str):
        super().__init__(f"property {property_index} violated: {message}")
        self.property_index = property_index
