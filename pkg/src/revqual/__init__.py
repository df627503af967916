"""Peer-review quality analysis: interpretable metrics, rubric-guided
LLM judging, reviewer profiles, and a trainable overall-quality estimate.
"""

from .agreement import CVReport, PairedScores, cross_validate, kendall_tau_b
from .engine import ENGINE_VERSION, AnalysisEngine, QualityReport, ReviewInput, SectionError
from .errors import RevqualError
from .features import FEATURE_SCHEMA, SCHEMA_VERSION, FeatureVector, assemble_features
from .judge import (
    ASPECT_KEYS,
    HttpJudgeBackend,
    MockJudgeBackend,
    Rubric,
    RubricScores,
    build_prompt,
    judge,
    load_rubric,
)
from .lexicons import LexiconSet, load_lexicons
from .models import TrainedModel, fit, load_model, predict, predict_matrix, save_model
from .openalex import (
    HttpConfig,
    MockOpenAlexClient,
    OpenAlexClient,
    ReviewerProfile,
    derive_profile,
)
from .textmetrics import StructuredMetrics, compute_structured_metrics, tokenize

__version__ = ENGINE_VERSION

__all__ = [
    "ASPECT_KEYS",
    "AnalysisEngine",
    "CVReport",
    "ENGINE_VERSION",
    "FEATURE_SCHEMA",
    "FeatureVector",
    "HttpConfig",
    "HttpJudgeBackend",
    "LexiconSet",
    "MockJudgeBackend",
    "MockOpenAlexClient",
    "OpenAlexClient",
    "PairedScores",
    "QualityReport",
    "ReviewInput",
    "ReviewerProfile",
    "RevqualError",
    "Rubric",
    "RubricScores",
    "SCHEMA_VERSION",
    "SectionError",
    "StructuredMetrics",
    "TrainedModel",
    "assemble_features",
    "build_prompt",
    "compute_structured_metrics",
    "cross_validate",
    "derive_profile",
    "fit",
    "judge",
    "kendall_tau_b",
    "load_lexicons",
    "load_model",
    "load_rubric",
    "predict",
    "predict_matrix",
    "save_model",
    "tokenize",
    "__version__",
]
