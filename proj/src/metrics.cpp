#include "olp/metrics.hpp"
#include "olp/error.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <vector>

namespace olp::metrics {

double iou(const model::Span& a, const model::Span& b) {
    const std::int64_t inter_first = std::max(a.first, b.first);
    const std::int64_t inter_last = std::min(a.last, b.last);
    const std::int64_t inter = inter_first > inter_last ? 0 : inter_last - inter_first + 1;
    const std::int64_t uni = a.size() + b.size() - inter;
    if (uni <= 0) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

static std::map<std::string, int> token_multiset(const std::string& s) {
    std::map<std::string, int> counts;
    std::string tok;
    auto flush = [&] {
        if (!tok.empty()) {
            ++counts[tok];
            tok.clear();
        }
    };
    for (unsigned char c : s) {
        if (std::isalnum(c))
            tok += static_cast<char>(std::tolower(c));
        else if (c >= 0x80)
            tok += static_cast<char>(c); // keep non-ASCII bytes as-is
        else
            flush();
    }
    flush();
    return counts;
}

double text_similarity(const std::string& a, const std::string& b) {
    const auto ca = token_multiset(a);
    const auto cb = token_multiset(b);
    std::int64_t na = 0, nb = 0, overlap = 0;
    for (const auto& [tok, n] : ca) na += n;
    for (const auto& [tok, n] : cb) nb += n;
    for (const auto& [tok, n] : ca) {
        auto it = cb.find(tok);
        if (it != cb.end()) overlap += std::min(n, it->second);
    }
    if (na == 0 && nb == 0) return 1.0;
    if (na == 0 || nb == 0 || overlap == 0) return 0.0;
    const double p = static_cast<double>(overlap) / static_cast<double>(na);
    const double r = static_cast<double>(overlap) / static_cast<double>(nb);
    return 2.0 * p * r / (p + r);
}

double map_score_to_v(double score, double v_correct, double v_wrong) {
    return v_wrong + (v_correct - v_wrong) * score;
}

double topic_recall(const model::TopicRecord& pred, const model::TopicRecord& gold) {
    std::int64_t total = 0, credited = 0;
    for (const auto& g_aspect : gold.aspects) {
        total += static_cast<std::int64_t>(g_aspect.entries.size());
        const auto* p_aspect = pred.find_aspect(g_aspect.name);
        if (!p_aspect) continue;
        for (const auto& g_entry : g_aspect.entries)
            for (const auto& p_entry : p_aspect->entries)
                if (p_entry.index == g_entry.index) {
                    ++credited;
                    break;
                }
    }
    if (total == 0) return 1.0;
    return static_cast<double>(credited) / static_cast<double>(total);
}

double recall_rate(const model::StructuredDocument& pred,
                   const model::StructuredDocument& gold) {
    if (pred.aspect_schema != gold.aspect_schema)
        throw config_error("recall_rate: aspect schema mismatch");
    if (gold.topics.empty()) return 1.0;

    constexpr double kTitleThreshold = 0.5;
    std::vector<bool> used(pred.topics.size(), false);
    double total = 0;
    for (const auto& g : gold.topics) {
        // greedy best-title match among unused predicted topics
        double best_sim = 0;
        std::size_t best = pred.topics.size();
        for (std::size_t i = 0; i < pred.topics.size(); ++i) {
            if (used[i]) continue;
            const double sim = text_similarity(pred.topics[i].title, g.title);
            if (sim > best_sim) {
                best_sim = sim;
                best = i;
            }
        }
        if (best < pred.topics.size() && best_sim >= kTitleThreshold) {
            used[best] = true;
            total += topic_recall(pred.topics[best], g);
        }
    }
    return total / static_cast<double>(gold.topics.size());
}

} // namespace olp::metrics
