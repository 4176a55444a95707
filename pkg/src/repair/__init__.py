from .core import RepairError, RepairFailed, EncodingError
from .model import AssemblyModel, build_assembly_model
from .operator import (
    RepairStage,
    RepairOutcome,
    Repairer,
    repair,
    assign_joints,
    allowed_joint_codes,
)
from .pathmatrix import (
    PathMatrix,
    EncodingReport,
    literal_connected,
    global_connected,
    verify_encodings_agree,
)
