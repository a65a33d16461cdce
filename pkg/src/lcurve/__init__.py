"""Curves in Lorentzian n-space: Frenet frames, g-position vector fields and
audits of the g-rectifying and g-normal characterizations."""
from .audit import (AuditReport, Classification, Identity, TheoremId, Verdict,
                    audit_g_normal, audit_null_rectifying, audit_spacelike_rectifying,
                    classify, hyperbolic_form_audit)
from .coeffs import (normal_coeffs, rectifying_coeffs_null, rectifying_coeffs_spacelike,
                     system_residuals)
from .errors import LCurveError, NumericError, ValidationError
from .expr import ScalarFn, derive_scalar_fn, eval_scalar_fn, parse_scalar_fn
from .frenet import (CurvatureSpec, CurveTrace, FrameKind, FrenetData, frenet_from_trace,
                     synthesize_from_curvatures)
from .gfield import (ComponentProfile, GFieldTrace, decompose_in_frame, g_position_vector,
                     primitive_G)
from .kernels import BACKEND
from .metric import (CausalCharacter, TimeOrientation, causal_character, gram_schmidt_pseudo,
                     lorentz_inner, lorentz_norm, time_orientation)

__version__ = "0.1.0"
