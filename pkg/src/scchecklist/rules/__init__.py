from .base import PHASES, SEVERITIES, SEVERITY_RANK, Diagnostic, RuleSpec
from .catalog import CATALOG, RULES, rule

__all__ = ["CATALOG", "Diagnostic", "PHASES", "RULES", "RuleSpec", "SEVERITIES", "SEVERITY_RANK", "rule"]
