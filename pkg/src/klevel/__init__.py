"""Exact k-level, corridor and immersion machinery for plane arrangements."""

from .corridors import (
    Corridor,
    ImmersionPair,
    KCorridorSet,
    antipodality_check,
    count_immersions,
    enumerate_k_corridors,
    is_immersed,
    level_profile,
    line_in_corridor,
    lovasz_count,
)
from .diamonds import LevelGraph, build_gamma, build_level_graph, count_diamonds, diamond_to_immersion, in_wedge
from .exact import (
    Arrangement,
    GeneralPositionError,
    IntersectionLine,
    Plane,
    Point3,
    intersect_pair,
    intersect_triple,
    level,
    validate,
)
from .generate import GenConfig, gen_random
from .harness import VerificationReport, experiment_batch, verify_all
from .sampling import SampleResult, clarkson_shor_sample
from .sweep import (
    CurtainArrangement,
    SweepFront,
    SweepTrace,
    WiringDiagram,
    classify_crossing,
    curtain_of,
    sweep_down,
    sweep_up,
    validate_wiring,
)

__version__ = "0.1.0"
