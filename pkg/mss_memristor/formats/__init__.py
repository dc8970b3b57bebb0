"""Config and File Formats.

Submodules:
  - config: YAML simulation configs, validated wholesale before anything runs.
  - csv_io: trace and measurement CSV files (17 significant digits, '#' header comments).
  - svg: I-V hysteresis plots.
"""
from .errors import TraceFormatError, ConfigError
