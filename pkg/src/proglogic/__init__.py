"""proglogic: structural analysis and logic-soundness classification of
LLM-generated math-solving programs."""

__version__ = "0.1.0"

from .taxonomy import CLASS_ORDER, TaxonomyLabel  # noqa: F401
from .parsing import AstModule, Node, parse_program, walk  # noqa: F401
from .analysis import (  # noqa: F401
    ApiCallProfile, ComplexityProfile, FeatureVector,
    api_calls, cyclomatic, def_use, extract_features,
)
from .corpus import (  # noqa: F401
    ProgramRecord, RepairReport, load_corpus, repair_imports,
    repair_indentation, repair_record,
)
from .annotation import (  # noqa: F401
    AgreementReport, LineAnnotation, agreement, derive_label,
    parse_annotations, serialize_annotations,
)
from .tree import DecisionTree, TrainParams, gini, predict, train  # noqa: F401
from .metrics import EvalMetrics, evaluate_predictions  # noqa: F401
