"""Rank-one Higgs bundles on a compact Riemann surface: period matrices,
the Betti, de Rham and Dolbeault pictures, the flat hyperkahler structure
on ``H^k`` and its twistor space."""

from .errors import (ChartError, CoordinateMismatch, FrameNotOrthonormal,
                     GenusTooLarge, HiggsError, ImNotPositiveDefinite,
                     NotLatticeVector, NotSymmetric, NotUnitary, NotUnitSphere,
                     SingularLattice)
from .moduli import BettiPoint, DeRhamPoint, DolbeaultPoint
from .period_matrix import Lattice, PeriodMatrix, validate
from .quaternion import (I_STRUCT, J_STRUCT, K_STRUCT, ComplexStructure,
                         Quaternion, QuaternionVector, act)
from .twistor import TwistorLine, TwistorPoint

__version__ = "0.1.0"
