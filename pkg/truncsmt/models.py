import enum


# --- Enums ---
class AlphaMode(str, enum.Enum):
    EPSILON = "epsilon"
    OVERRIDE = "override"


class ZeroMethod(str, enum.Enum):
    EXACT_POLYNOMIAL = "exact_polynomial"
    SINGLE_TERM = "single_term"
    ARGUMENT_PRINCIPLE = "argument_principle"


class RowFlag(str, enum.Enum):
    NEGATIVE_MARGIN = "NEGATIVE_MARGIN"
    EQUALIZED_EXCEEDS = "EQUALIZED_EXCEEDS"


class OutputFormat(str, enum.Enum):
    CSV = "csv"
    JSON = "json"
