"""
Application version metadata.
"""

__version__ = "1.0.0"
REPORT_SCHEMA_VERSION = 1
