"""gesturec: compile gesture-annotated dialog scripts for two virtual
storytelling agents into deterministic, timed gesture-performance scripts,
and reproduce the accompanying experiment statistics."""

from .adaptation import AdaptationSpec, VariantPlan, check_copy_provenance, resolve_variant
from .align import WordTimingTrack, align_strokes, parse_word_timings
from .catalog import GestureCatalog, GestureDef, format_catalog, load_catalog, lookup
from .dsl import (
    AnnotatedDialog,
    Features,
    GestureAnnotation,
    Turn,
    format_dialog,
    parse_dialog,
    segment_sentences,
)
from .emitter import ScriptDocument, emit_script, read_script
from .personality import (
    ParameterSet,
    PersonalityProfile,
    apply_personality,
    profile_from_extraversion,
)
from .pipeline import CompileResult, PipelineSettings, compile_dialog
from .scheduler import SchedulerConfig, Timeline, schedule, validate_timeline

__version__ = "0.1.0"

__all__ = [
    "AdaptationSpec",
    "AnnotatedDialog",
    "CompileResult",
    "Features",
    "GestureAnnotation",
    "GestureCatalog",
    "GestureDef",
    "ParameterSet",
    "PersonalityProfile",
    "PipelineSettings",
    "SchedulerConfig",
    "ScriptDocument",
    "Timeline",
    "Turn",
    "VariantPlan",
    "WordTimingTrack",
    "align_strokes",
    "apply_personality",
    "check_copy_provenance",
    "compile_dialog",
    "emit_script",
    "format_catalog",
    "format_dialog",
    "load_catalog",
    "lookup",
    "parse_dialog",
    "parse_word_timings",
    "profile_from_extraversion",
    "read_script",
    "resolve_variant",
    "schedule",
    "segment_sentences",
    "validate_timeline",
]
