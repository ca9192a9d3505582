THUMB = 0
"""Thumb chain index in every hand model"""

SUPPORTED_METHODS = [
    "relative",
    "jacobian",
    "deltacmd",
    "teleop",
]

SUPPORTED_REPORT_FORMATS = [
    "json",
    "csv",
]

BUNDLED_MODELS = [
    "hand21",
    "finger2",
]

BUNDLED_SCENARIOS = [
    "open_hand_misaligned",
    "pinch_adversarial",
    "copilot_wrist",
]

MODEL_FILE_VERSION = 1
CORRECTION_LOG_SCHEMA = "correction-log"
CORRECTION_LOG_VERSION = 1
METRICS_SCHEMA_VERSION = 1

# Required per-seed reduction of the relative method against direct switching
REDUCTION_TARGET = 0.99

# so3_log refuses rotations closer than this to pi
SO3_LOG_MAX_ANGLE_MARGIN = 1e-6
