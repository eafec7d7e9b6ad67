#pragma once

#include "olp/model.hpp"

#include <string>

namespace olp::metrics {

// Discrete intersection-over-union of two inclusive index spans.
double iou(const model::Span& a, const model::Span& b);

// Token-level F1 over whitespace/punctuation-normalized unigram multisets.
// Symmetric; identical strings score 1, disjoint vocabularies 0.
double text_similarity(const std::string& a, const std::string& b);

// Affine map of a [0,1] score onto [v_wrong, v_correct].
double map_score_to_v(double score, double v_correct, double v_wrong);

// Per-topic fraction of gold passages recovered under the correct aspect,
// averaged over gold topics. Topics are matched greedily by title
// similarity at threshold 0.5; unmatched gold topics contribute 0.
double recall_rate(const model::StructuredDocument& pred,
                   const model::StructuredDocument& gold);

// Recall of a single predicted topic against a single gold topic
// (aspect-credited index counting; gold topics with no passages score 1).
double topic_recall(const model::TopicRecord& pred, const model::TopicRecord& gold);

} // namespace olp::metrics
