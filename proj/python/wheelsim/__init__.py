"""Python bindings for the wheelchair simulator core."""

from ._core import (  # noqa: F401
    DEFAULT_DT,
    ChairParams,
    ChairState,
    DecodeError,
    Frame,
    InsufficientSamples,
    JoystickSample,
    Level,
    ParseError,
    Session,
    SessionEnded,
    SessionMetrics,
    SessionNotEnded,
    SessionReport,
    SimEvent,
    ValidationError,
    WheelCommand,
    apply_slew,
    calibrate_center,
    contrast_ratio,
    goal_reached,
    integrate_pose,
    is_on_track,
    load_level,
    load_level_file,
    map_joystick,
    normalize,
    parse_report,
    project_to_route,
    relative_luminance,
    replay,
    step,
    validate_accessibility,
    wire_roundtrip,
    wire_type,
)

__version__ = "0.1.0"
