"""/c3rf/src/c3rf/core/dtypes.py
Enumerations for the string choices that travel through configs and the CLI.
"""

from enum import Enum


class PredictorKind(Enum):
    """Available predictors."""
    MAP = "map"
    DELTA = "delta"
    MASS = "mass"
    CRF_FELA = "crf_fela"
    C3RF_FELA = "c3rf_fela"


class LossName(Enum):
    """Available loss functions."""
    HAMMING = "hamming"
    IOU = "iou"


class SolverName(Enum):
    """MAP solvers usable by DivMBest."""
    EXHAUSTIVE = "exhaustive"
    MAXPRODUCT = "maxproduct"
    AUTO = "auto"


class InferenceMethod(Enum):
    """How marginals, partition functions and masses are computed."""
    EXACT = "exact"
    BETHE = "bethe"
    AUTO = "auto"


class CVMode(Enum):
    """Cross-validation fold layouts."""
    KFOLD = "kfold"
    LEAVE_ONE_OUT = "leave_one_out"


class TuneObjective(Enum):
    """Parameter-selection objectives."""
    ERM = "erm"
    BDT = "bdt"
