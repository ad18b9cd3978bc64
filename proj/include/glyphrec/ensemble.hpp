#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "glyphrec/error.hpp"
#include "glyphrec/features.hpp"
#include "glyphrec/mlp.hpp"

namespace glyphrec {

/// Classifier order used for fusion weights and every length-4 array in this
/// header: chain code, intersection, shadow, line fit.
inline constexpr std::array<Family, kFamilyCount> kEnsembleOrder = {
    Family::ChainCode, Family::Intersection, Family::Shadow, Family::LineFit};

/// Position of a family within kEnsembleOrder.
inline constexpr int ensemble_slot(Family f) {
    for (int k = 0; k < kFamilyCount; ++k)
        if (kEnsembleOrder[static_cast<std::size_t>(k)] == f) return k;
    return -1;
}

enum class FusionMode { Vote, ConfidenceSum };

inline const char* fusion_mode_name(FusionMode m) {
    return m == FusionMode::Vote ? "vote" : "confsum";
}

struct FusionWeights {
    std::array<double, kFamilyCount> omega{};
    std::array<double, kFamilyCount> source_accuracies{};
};

/// omega_k = d_k / sum(d); accuracies must be positive.
inline FusionWeights compute_weights(const std::array<double, kFamilyCount>& accuracies) {
    double total = 0.0;
    for (double d : accuracies) {
        if (!(d > 0.0)) throw NonPositiveAccuracy("fusion accuracies must be > 0");
        total += d;
    }
    FusionWeights w;
    w.source_accuracies = accuracies;
    for (std::size_t k = 0; k < accuracies.size(); ++k) w.omega[k] = accuracies[k] / total;
    return w;
}

/// Fused per-class support and the resulting ranking.
struct CombinedDecision {
    std::vector<double> scores;        ///< per-class support in the active mode
    std::vector<double> tiebreak;      ///< confidence-sum support, used to order ties
    std::vector<int> ranked;           ///< class indices by descending score
    int winner = 0;
};

/// Combines four confidence vectors (in kEnsembleOrder) into one decision.
/// Vote mode gives each classifier's argmax class that classifier's full
/// weight; confidence-sum mode distributes the weight proportionally to the
/// classifier's normalized outputs. Ranking ties are broken first by the
/// confidence-sum support, then by the lower class index.
inline CombinedDecision combine_decisions(
    const std::array<std::vector<double>, kFamilyCount>& confidences, const FusionWeights& w,
    FusionMode mode = FusionMode::Vote) {
    const std::size_t m = confidences[0].size();
    for (const auto& c : confidences)
        if (c.size() != m || m == 0)
            throw DimensionMismatch("classifier confidence vectors must share one length");

    std::vector<double> vote(m, 0.0), confsum(m, 0.0);
    for (std::size_t k = 0; k < confidences.size(); ++k) {
        const std::vector<double>& c = confidences[k];
        vote[static_cast<std::size_t>(argmax_index(c))] += w.omega[k];
        const double total = std::accumulate(c.begin(), c.end(), 0.0);
        if (total > 0.0)
            for (std::size_t i = 0; i < m; ++i) confsum[i] += w.omega[k] * c[i] / total;
    }

    CombinedDecision d;
    d.scores = (mode == FusionMode::Vote) ? vote : confsum;
    d.tiebreak = std::move(confsum);
    d.ranked.resize(m);
    std::iota(d.ranked.begin(), d.ranked.end(), 0);
    std::sort(d.ranked.begin(), d.ranked.end(), [&d](int a, int b) {
        const double sa = d.scores[static_cast<std::size_t>(a)], sb = d.scores[static_cast<std::size_t>(b)];
        if (sa != sb) return sa > sb;
        const double ta = d.tiebreak[static_cast<std::size_t>(a)], tb = d.tiebreak[static_cast<std::size_t>(b)];
        if (ta != tb) return ta > tb;
        return a < b;
    });
    d.winner = d.ranked.front();
    return d;
}

/// First k entries of the ranking.
inline std::vector<int> rank_top_k(const CombinedDecision& d, int k) {
    if (k < 1 || k > static_cast<int>(d.ranked.size()))
        throw BadK("k must be between 1 and the class count");
    return std::vector<int>(d.ranked.begin(), d.ranked.begin() + k);
}

}  // namespace glyphrec
