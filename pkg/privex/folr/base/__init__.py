import privex.folr.base.exceptions
from privex.folr.base.exceptions import *
from privex.folr.base.decorators import retry_with_jitter
from privex.folr.base.SettingsMixin import SettingsMixin
from privex.folr.base.BaseBasis import BaseBasis
import privex.folr.base.objects
from privex.folr.base.objects import (
    ClassDistribution, CostFunction, CvReport, Dataset, FitConfig, FitDiagnostics, FittedFolr, FoldResult,
    FunctionalSample, GramMatrix, OrdinalModel, Prediction, RawCurve, ReducedDesign, SmoothingResult, StandardErrors,
    SyntheticSpec, Thresholds,
)
# Imported last, it needs the ordinal model which in turn needs the objects above.
from privex.folr.base.BaseEstimator import BaseEstimator
from privex.folr.base.BaseArm import BaseArm
from privex.folr.base.BaseLoader import BaseLoader
