"""Q-learning LLM router and streaming topic/aspect pipeline (C++ core)."""

from rolerl._core import (  # noqa: F401
    OlpError,
    classify_outcome,
    compute_cost,
    compute_reward,
    iou,
    map_score_to_v,
    parse_transcript,
    pipeline_oracle,
    profiles,
    recall_rate,
    render_document,
    run_baseline,
    run_experiment,
    text_similarity,
    validate_document,
)

__version__ = "0.1.0"
