"""Self-welding of bordered flat surfaces and genus-one Teichmüller geometry."""

from .errors import (
    BLCViolated,
    ConvergenceError,
    InconsistentConstraints,
    InstructionError,
    MathError,
    NotExceptional,
    NotIShaped,
    SignatureError,
    ValidationError,
    WeldlabError,
)
from .genus_one import (
    FoliationParam,
    GeodesicRay,
    HyperbolicDisk,
    TauPoint,
    disk_from_horocycles,
    ext_foliation,
    foliation_value,
    geodesic_point,
    horocycle,
    horocycle_center,
    ioffe_ray_from_boundary,
    ioffe_ray_through,
    max_ext_on_disk,
    membership,
    mk_disk,
    project_to_disk,
    slit_torus_scenario,
    teich_distance,
)
from .kernels import BACKEND
from .oracle import enumerate_regular_weldings
from .regular import (
    check_blc,
    classify_component,
    construct_regular,
    exceptional_slide_bound,
    is_in_AU,
    reopen_slit,
    sample_exceptional_family,
)
from .surface import (
    ArcRange,
    BorderComponent,
    BoundaryPoint,
    InteriorPoint,
    SurfaceSignature,
    subdivide,
    trajectories,
    validate_signature,
)
from .welding import (
    WeldGraph,
    WeldingInstruction,
    WeldOutcome,
    instruction_canonical_key,
    vertex_order,
    weld,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
