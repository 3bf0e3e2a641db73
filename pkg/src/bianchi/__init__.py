"""Computational library for the Bianchi groups of class number one.

Subpackages cover exact quadratic-integer arithmetic, the upper half-space
model and its isometries, frame rotations and Wigner matrices, coset
enumeration, Dedekind zeta sums, Eisenstein-type series, and horocycle
equidistribution experiments.
"""

from .number_field import (
    CLASS_NUMBER_ONE_D,
    QuadInt,
    RingSpec,
    ring_spec,
    is_coprime,
    bezout,
)
from .hyperbolic3 import (
    PointH3,
    SU2Matrix,
    MatrixSL2,
    IwasawaCoords,
    translation_matrix,
    scaling_matrix,
    frame_matrix,
    mobius_act,
    iwasawa,
    t_part,
    geodesic_flow,
    horocycle_flow,
    hyperbolic_distance,
)
from .rotations import spin_cover, frame_rotation, B_matrix
from .harmonics import (
    WignerIndex,
    EulerAngles,
    ylm,
    rot_euler,
    euler_extract,
    wigner_small_d,
    wigner_D,
    wigner_D_matrix,
)

__version__ = "0.1.0"
