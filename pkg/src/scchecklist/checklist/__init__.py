from .config import (
    CONFIG_ENV,
    CONFIG_FILENAME,
    DEFAULT_THRESHOLDS,
    ConfigError,
    ManualAnswer,
    ScanConfig,
    config_from_dict,
    default_config,
    load_config,
)
from .evaluate import STATUSES, ChecklistReport, ItemStatus, evaluate_checklist
from .manifest import (
    PATTERN_IDS,
    ChecklistItem,
    ChecklistManifest,
    ManifestError,
    PatternRef,
    export_manifest,
    load_manifest,
)

__all__ = [
    "CONFIG_ENV",
    "CONFIG_FILENAME",
    "DEFAULT_THRESHOLDS",
    "PATTERN_IDS",
    "STATUSES",
    "ChecklistItem",
    "ChecklistManifest",
    "ChecklistReport",
    "ConfigError",
    "ItemStatus",
    "ManifestError",
    "ManualAnswer",
    "PatternRef",
    "ScanConfig",
    "config_from_dict",
    "default_config",
    "evaluate_checklist",
    "export_manifest",
    "load_config",
    "load_manifest",
]
