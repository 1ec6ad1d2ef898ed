"""Exact computations with vertex superalgebroids, 1-truncated conformal
superalgebras, the loop and Verma constructions of the associated vertex
superalgebra V_B, and the Vir+ (semi-conformal) structure on it."""
from __future__ import annotations

from .algebra import StructureAlgebra
from .algebroid import (
    VertexSuperalgebroid, check_algebroid_axioms, correspondence_report, from_truncated_conformal,
    to_truncated_conformal,
)
from .document import InputDocument, load_document, parse_document
from .exact import Q, rational
from .kahler import (
    KahlerModule, SectionFourInput, build_kahler, build_section4_algebroid, build_section4_L1,
)
from .loop import LoopElement, LoopQuotient, check_loop_jacobi
from .report import CheckFailed, CheckReport
from .tconf import TruncatedConformal, check_tconf
from .verma import GradedQuotient, VermaModule, build_vb, verify_borcherds
from .virplus import (
    BModuleData, check_dhat_equivariance, check_Lm_mode_bracket, check_LmE_stability,
    check_semiconformal_conditions, check_vir_relations_on_loop, invariant_form_dimension, vir_act_loop,
)

__all__ = [
    "BModuleData", "CheckFailed", "CheckReport", "GradedQuotient", "InputDocument", "KahlerModule",
    "LoopElement", "LoopQuotient", "Q", "SectionFourInput", "StructureAlgebra", "TruncatedConformal",
    "VermaModule", "VertexSuperalgebroid", "build_kahler", "build_section4_L1", "build_section4_algebroid",
    "build_vb", "check_algebroid_axioms", "check_dhat_equivariance", "check_Lm_mode_bracket",
    "check_LmE_stability", "check_loop_jacobi", "check_semiconformal_conditions", "check_tconf",
    "check_vir_relations_on_loop", "correspondence_report", "from_truncated_conformal", "invariant_form_dimension",
    "load_document", "parse_document", "rational", "to_truncated_conformal", "verify_borcherds", "vir_act_loop",
]
