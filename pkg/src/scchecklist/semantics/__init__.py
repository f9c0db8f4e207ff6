from .calls import CALL_KINDS, EXTERNAL_KINDS, CallSite, classify_calls
from .cfg import Cfg, Edge, BasicBlock, build_cfg
from .context import AnalysisContext, AnalysisNote, FunctionFacts, build_context
from .effects import StateAccess, StateEffect, collect_state_effects
from .linearize import LinearizationError, c3_merge, linearize, linearize_all
from .symbols import BUILTIN_NAMES, Resolution, SymbolTable, build_symbols

__all__ = [
    "AnalysisContext",
    "AnalysisNote",
    "BasicBlock",
    "BUILTIN_NAMES",
    "CALL_KINDS",
    "CallSite",
    "Cfg",
    "EXTERNAL_KINDS",
    "Edge",
    "FunctionFacts",
    "LinearizationError",
    "Resolution",
    "StateAccess",
    "StateEffect",
    "SymbolTable",
    "build_cfg",
    "build_context",
    "build_symbols",
    "c3_merge",
    "classify_calls",
    "collect_state_effects",
    "linearize",
    "linearize_all",
]
