"""Spin system description toolkit.

A validated data model for multi-spin systems, lossless conversion among
rotation and interaction-amplitude conventions, importers from
electronic-structure outputs, exporters to simulation package inputs and
render-ready scene geometry for interactive editors.
"""

from .amplitudes import (
    AxRh,
    DegenerateConventionError,
    EigenSystem,
    Haeberlen,
    InvalidComponentsError,
    RepresentationBundle,
    SpanSkew,
    SphericalComponents,
    axrh_from_eigens,
    bundle_from_eigens,
    bundle_from_matrix,
    eigens_from_axrh,
    eigens_from_haeberlen,
    eigens_from_matrix,
    eigens_from_spanskew,
    frobenius_norm,
    haeberlen_from_eigens,
    matrix_from_spherical,
    recompute_views,
    spanskew_from_eigens,
    spherical_from_matrix,
)
from .exporters import (
    ExportOptions,
    UnsupportedTargetError,
    export,
    export_easyspin,
    export_simpson,
    export_spinach,
)
from .geometry import (
    Ellipsoid,
    SceneDocument,
    build_scene,
    detect_bonds,
    dipolar_tensor,
    make_ellipsoid,
)
from .importers import (
    ImportFileError,
    ImportOptions,
    filter_by_norm,
    import_gaussian_log,
    import_magres,
    import_xyz,
)
from .isotopes import ISOTOPES, IsotopeRecord
from .model import (
    AmplitudeSpec,
    EigenAmplitude,
    ExplicitEigenvalues,
    InteractionKind,
    InteractionTerm,
    IsoAnisoAsym,
    IsoAxRh,
    IsoSpanSkew,
    MatrixAmplitude,
    ScalarAmplitude,
    Spin,
    SpinSystem,
    ValidationReport,
    apply_edit,
    bundle_for_term,
    promote_amplitude,
    validate_system,
)
from .rotations import (
    AngleAxis,
    DCM,
    EulerAngles,
    InvalidRotationError,
    Quaternion,
    Rotation,
    compose,
    from_dcm,
    identity_rotation,
    inverse,
    to_dcm,
    wigner_d2,
)
from .spinxml_io import (
    ParseReport,
    SpinXMLParseError,
    parse_spinxml,
    validate_against_schema,
    write_spinxml,
)

__version__ = "0.1.0"
