"""Authentication codes from combinatorial designs, their attack values, and
the correspondence with robust (2,2)-threshold schemes."""

from .authcode import AnalysisReport, AuthCode, analyze, p_d0, p_d1, p_ks
from .designs import OrderedDesign, develop, develop_bases, equitable_order
from .foundations import Distribution, dist_uniform, rat
from .threshold import ThresholdScheme, robustness
from .transform import authcode_to_threshold, dual, threshold_to_authcode

__all__ = [
    "AnalysisReport",
    "AuthCode",
    "Distribution",
    "OrderedDesign",
    "ThresholdScheme",
    "analyze",
    "authcode_to_threshold",
    "develop",
    "develop_bases",
    "dist_uniform",
    "dual",
    "equitable_order",
    "p_d0",
    "p_d1",
    "p_ks",
    "rat",
    "robustness",
    "threshold_to_authcode",
]
