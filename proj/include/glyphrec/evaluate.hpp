#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "glyphrec/ensemble.hpp"
#include "glyphrec/error.hpp"

namespace glyphrec {

inline constexpr int kTopKMax = 5;

/// Counting results for one evaluated sample set.
struct EvalCounts {
    std::size_t n = 0;
    std::array<std::size_t, kFamilyCount> classifier_correct{};  ///< kEnsembleOrder
    std::array<std::size_t, kTopKMax> topk_correct{};
    std::size_t union_correct = 0;

    double classifier_pct(int k) const {
        return n ? 100.0 * static_cast<double>(classifier_correct[static_cast<std::size_t>(k)]) /
                       static_cast<double>(n)
                 : 0.0;
    }
    double topk_pct(int k) const {
        return n ? 100.0 * static_cast<double>(topk_correct[static_cast<std::size_t>(k - 1)]) /
                       static_cast<double>(n)
                 : 0.0;
    }
    double union_pct() const {
        return n ? 100.0 * static_cast<double>(union_correct) / static_cast<double>(n) : 0.0;
    }

    EvalCounts& operator+=(const EvalCounts& o) {
        n += o.n;
        for (std::size_t i = 0; i < classifier_correct.size(); ++i)
            classifier_correct[i] += o.classifier_correct[i];
        for (std::size_t i = 0; i < topk_correct.size(); ++i) topk_correct[i] += o.topk_correct[i];
        union_correct += o.union_correct;
        return *this;
    }
};

/// Evaluation summary: per-classifier and fused accuracies, pooled over all
/// folds, with a per-fold breakdown and the pooled confusion matrix of the
/// fused winner.
struct EvalReport {
    FusionMode mode = FusionMode::ConfidenceSum;
    std::vector<std::string> label_map;
    std::vector<EvalCounts> folds;
    EvalCounts pooled;
    std::vector<std::vector<long>> confusion;  ///< [true][predicted]

    int top_k_limit() const {
        return std::min(kTopKMax, static_cast<int>(label_map.size()));
    }
};

/// Scores one test set given each classifier's confidence vectors
/// (kEnsembleOrder) per sample. Updates `confusion` with the fused winner
/// when a matrix is supplied.
inline EvalCounts evaluate_decisions(
    const std::vector<std::array<std::vector<double>, kFamilyCount>>& confidences,
    const std::vector<int>& labels, const FusionWeights& weights, FusionMode mode,
    std::vector<std::vector<long>>* confusion = nullptr) {
    if (confidences.size() != labels.size())
        throw DimensionMismatch("confidence table and label list differ in length");
    EvalCounts counts;
    counts.n = labels.size();
    for (std::size_t s = 0; s < labels.size(); ++s) {
        const int truth = labels[s];
        bool any = false;
        for (int k = 0; k < kFamilyCount; ++k) {
            const bool hit = argmax_index(confidences[s][static_cast<std::size_t>(k)]) == truth;
            if (hit) {
                ++counts.classifier_correct[static_cast<std::size_t>(k)];
                any = true;
            }
        }
        if (any) ++counts.union_correct;

        const CombinedDecision d = combine_decisions(confidences[s], weights, mode);
        const int limit = std::min(kTopKMax, static_cast<int>(d.ranked.size()));
        for (int k = 0; k < limit; ++k) {
            if (d.ranked[static_cast<std::size_t>(k)] == truth) {
                for (int j = k; j < kTopKMax; ++j) ++counts.topk_correct[static_cast<std::size_t>(j)];
                break;
            }
        }
        if (confusion) ++(*confusion)[static_cast<std::size_t>(truth)][static_cast<std::size_t>(d.winner)];
    }
    return counts;
}

namespace detail {

inline std::string pct2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace detail

/// Fixed-layout text report: classifier accuracies in fusion order, then
/// fused top-1..5 rows, then the union accuracy, pooled over folds, followed
/// by the per-fold breakdown.
inline void render_report_text(std::ostream& out, const EvalReport& r) {
    out << "fusion mode: " << fusion_mode_name(r.mode) << "\n";
    out << "classifier top-1 accuracy (%):\n";
    for (int k = 0; k < kFamilyCount; ++k)
        out << "  " << family_name(kEnsembleOrder[static_cast<std::size_t>(k)]) << ": "
            << detail::pct2(r.pooled.classifier_pct(k)) << "\n";
    out << "ensemble top-k accuracy (%):\n";
    for (int k = 1; k <= r.top_k_limit(); ++k)
        out << "  top-" << k << ": " << detail::pct2(r.pooled.topk_pct(k)) << "\n";
    out << "any-classifier union accuracy (%): " << detail::pct2(r.pooled.union_pct()) << "\n";
    for (std::size_t f = 0; f < r.folds.size(); ++f) {
        const EvalCounts& c = r.folds[f];
        out << "fold " << f << " (n=" << c.n << "):";
        for (int k = 0; k < kFamilyCount; ++k)
            out << " " << family_name(kEnsembleOrder[static_cast<std::size_t>(k)]) << "="
                << detail::pct2(c.classifier_pct(k));
        out << " top1=" << detail::pct2(c.topk_pct(1))
            << " union=" << detail::pct2(c.union_pct()) << "\n";
    }
}

}  // namespace glyphrec
