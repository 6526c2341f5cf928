"""Reference matrices used by the scripts, tests and CLI demos.

``BOUND_DEMO_*`` are three matrices whose columns share a large sup-norm;
``BOUND_DEMO_*_RIGHT_INVERSE`` are published right inverses for them, and
``BOUND_DEMO_*_COMPLETION`` are integer rows R such that the first m columns
of inv([A; R]) reproduce those right inverses exactly.
"""
from __future__ import annotations

from fractions import Fraction as F

from .algebraic import NumberFieldSpec
from .forge import SensingMatrix

# 3 x 6, entries in {-1, 0, 1}, all twenty 3 x 3 minors nonzero.
TERNARY_3X6 = SensingMatrix((
    (1, 1, 1, 1, 1, 1),
    (1, 1, 0, 0, -1, -1),
    (1, 0, 1, -1, 0, -1),
))

CUBE_ROOT_TWO = NumberFieldSpec((1, 0, 0, -2))

# d x m integer matrix lifted through Q(2^(1/3)); the transpose of TERNARY_3X6.
CUBE_ROOT_TWO_B = tuple(zip(*TERNARY_3X6.entries))

BOUND_DEMO_1 = (
    (15, 15, 4, 13, 15),
    (2, -1, -15, 2, -13),
    (-13, 2, 1, -15, 4),
)
BOUND_DEMO_1_RIGHT_INVERSE = (
    (F(3392, 3905), F(23, 355), F(3021, 3905)),
    (F(-1949, 2130), F(3, 710), F(-1697, 2130)),
    (F(-6409, 9372), F(-19, 284), F(-5647, 9372)),
    (F(-6407, 9372), F(-17, 284), F(-6353, 9372)),
    (F(13869, 15620), F(1, 1420), F(12047, 15620)),
)
BOUND_DEMO_1_COMPLETION = (
    (15, 4, 13, 2, 1),
    (4, -13, 2, 1, -15),
)

BOUND_DEMO_2 = (
    (50000, 20, 40, 3, -50000, 30),
    (-1, -50000, 20, 40, 4, -50000),
    (-50000, -1, -50000, -50000, 20, 40),
)
BOUND_DEMO_2_RIGHT_INVERSE = (
    (F(3907968052500399551464, 269371733328769889476945),
     F(782608564652549551187, 53874346665753977895389),
     F(60146658957656226816, 4144180512750305991953)),
    (F(593868225682933391, 107748693331507955790778),
     F(-780555233932686945, 53874346665753977895389),
     F(22817064638544932, 4144180512750305991953)),
    (F(-31214424035248447494619, 2154973866630159115815560),
     F(-3129803777458426735103, 215497386663015911581556),
     F(-240538498302920543093, 16576722051001223967812)),
    (F(-167547159662404885, 9795335757409814162798),
     F(14067072993904685, 4897667878704907081399),
     F(-6446699511344665, 376743682977300544723)),
    (F(31195662429419099248023, 2154973866630159115815560),
     F(3127927852920367185691, 215497386663015911581556),
     F(240394120545528419881, 16576722051001223967812)),
    (F(-11261122160952583033, 1077486933315079557907780),
     F(-1125763802241065145, 107748693331507955790778),
     F(-86645392385558751, 8288361025500611983906)),
)
BOUND_DEMO_2_COMPLETION = (
    (2, 5000, -1, 5000, 1, 1),
    (40, 40, 3, 2, -1, 50000),
    (-30, -30, -50000, 1, -50000, -10),
)

BOUND_DEMO_3 = (
    (6, 13, 13, 11, 6, 12, 11, 10),
    (7, 12, 6, 13, 7, 11, 11, 9),
    (8, 11, 12, 9, 12, 12, 12, 11),
    (13, 10, 7, 8, 13, 13, 13, 13),
)
BOUND_DEMO_3_RIGHT_INVERSE = (
    (F(-736, 1859), F(1865, 5577), F(566, 1859), F(-661, 1859)),
    (F(1990, 1859), F(328, 1859), F(-3844, 1859), F(1277, 1859)),
    (F(-1635, 1859), F(646, 1859), F(2495, 1859), F(-1577, 1859)),
    (F(-3015, 1859), F(4273, 5577), F(4021, 1859), F(-2584, 1859)),
    (F(1499, 1859), F(-1654, 5577), F(-2350, 1859), F(1273, 1859)),
    (F(1228, 169), F(-2117, 507), F(-1523, 169), F(1045, 169)),
    (F(-5605, 1859), F(2243, 1859), F(8286, 1859), F(-4218, 1859)),
    (F(-7461, 1859), F(11917, 5577), F(9390, 1859), F(-6289, 1859)),
)
BOUND_DEMO_3_COMPLETION = (
    (-1, 1, 1, 2, 3, 1, 1, 1),
    (1, -1, 2, -3, 2, -1, 0, -1),
    (-1, 1, 0, -4, -3, 2, 0, 5),
    (-16, -3, -3, -2, 4, -5, -4, -3),
)

BOUND_DEMOS = {
    "bound_demo_1": (BOUND_DEMO_1, BOUND_DEMO_1_RIGHT_INVERSE, BOUND_DEMO_1_COMPLETION),
    "bound_demo_2": (BOUND_DEMO_2, BOUND_DEMO_2_RIGHT_INVERSE, BOUND_DEMO_2_COMPLETION),
    "bound_demo_3": (BOUND_DEMO_3, BOUND_DEMO_3_RIGHT_INVERSE, BOUND_DEMO_3_COMPLETION),
}
