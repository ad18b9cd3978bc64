#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "glyphrec/dataset.hpp"
#include "glyphrec/ensemble.hpp"
#include "glyphrec/evaluate.hpp"
#include "glyphrec/io.hpp"
#include "glyphrec/mlp.hpp"
#include "glyphrec/pipeline.hpp"

namespace glyphrec {

/// Hidden layer width used for each feature family's classifier.
inline constexpr int default_hidden_size(Family f) {
    switch (f) {
        case Family::Intersection: return 20;
        case Family::Shadow: return 30;
        case Family::LineFit: return 40;
        case Family::ChainCode: return 70;
    }
    return 0;
}

enum class Protocol { ThreeFold, Holdout };

inline const char* protocol_name(Protocol p) {
    return p == Protocol::ThreeFold ? "3fold" : "holdout";
}

struct ProtocolOptions {
    Protocol protocol = Protocol::ThreeFold;
    std::uint64_t seed = 1;
    double learning_rate = 0.8;
    double momentum = 0.7;
    int max_epochs = 300;
    double target_sse = 0.0;
    FusionMode fusion = FusionMode::ConfidenceSum;
    double holdout_train_fraction = 0.68;
    unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Everything produced by training one fold.
struct TrainedFold {
    std::array<MlpModel, kFamilyCount> models;  ///< kEnsembleOrder
    Normalizer normalizer;
    std::array<double, kFamilyCount> d{};       ///< validation top-1 %, kEnsembleOrder
    FusionWeights weights;
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
};

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Extracts feature bundles for every sample, in parallel. Results are
/// stored by sample index, so the output does not depend on scheduling.
/// When `debug_dir` is set, each sample's pipeline stages are written there
/// as PGM files prefixed with the sample id.
inline std::vector<FeatureBundle> extract_bundles(const Dataset& ds, unsigned threads = 0,
                                                  const std::filesystem::path& debug_dir = {}) {
    if (!debug_dir.empty()) std::filesystem::create_directories(debug_dir);
    std::vector<FeatureBundle> bundles(ds.samples.size());
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= ds.samples.size()) return;
            try {
                if (debug_dir.empty()) {
                    bundles[i] = extract_feature_bundle(read_image(ds.samples[i].path));
                } else {
                    std::string prefix = ds.samples[i].id;
                    std::replace(prefix.begin(), prefix.end(), '/', '_');
                    const StageDump dump = [&debug_dir, &prefix](const std::string& stage,
                                                                 const BinaryImage& img) {
                        write_pgm(debug_dir / (prefix + "_" + stage + ".pgm"), img);
                    };
                    bundles[i] = extract_feature_bundle(read_image(ds.samples[i].path), &dump);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    const unsigned n = std::min<unsigned>(resolve_threads(threads),
                                          static_cast<unsigned>(std::max<std::size_t>(ds.samples.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return bundles;
}

namespace detail {

inline std::map<std::string, std::size_t> index_by_id(const std::vector<LabeledSample>& samples) {
    std::map<std::string, std::size_t> m;
    for (std::size_t i = 0; i < samples.size(); ++i) m[samples[i].id] = i;
    return m;
}

}  // namespace detail

/// Trains the four family classifiers for one train/test split. The last
/// tenth of the (seeded) shuffled training ids is held out as a validation
/// slice: models fit on the rest, and each classifier's top-1 accuracy on
/// the slice becomes its fusion accuracy d. A classifier that scores zero
/// there is floored to a tiny positive value so the weight formula stays
/// defined.
inline TrainedFold train_fold(const Dataset& ds, const std::vector<FeatureBundle>& bundles,
                              std::vector<std::string> train_ids, std::vector<std::string> test_ids,
                              const ProtocolOptions& opts, int fold_index) {
    const auto by_id = detail::index_by_id(ds.samples);
    const int m = static_cast<int>(ds.label_map.size());

    Rng slice_rng(derive_seed(opts.seed, static_cast<std::uint64_t>(fold_index), 0x7a));
    std::vector<std::string> shuffled = train_ids;
    slice_rng.shuffle(shuffled);
    const std::size_t n_val = std::max<std::size_t>(1, shuffled.size() / 10);
    const std::vector<std::string> fit_ids(shuffled.begin(), shuffled.end() - static_cast<std::ptrdiff_t>(n_val));
    const std::vector<std::string> val_ids(shuffled.end() - static_cast<std::ptrdiff_t>(n_val), shuffled.end());
    if (fit_ids.empty()) throw TooFewSamples("training split too small for a validation slice");

    TrainedFold fold;
    fold.train_ids = std::move(train_ids);
    fold.test_ids = std::move(test_ids);

    std::vector<const FeatureBundle*> train_bundles;
    for (const std::string& id : fold.train_ids) train_bundles.push_back(&bundles[by_id.at(id)]);
    fold.normalizer = fit_normalizer(train_bundles);

    std::array<std::exception_ptr, kFamilyCount> failures{};
    auto train_family = [&](int slot) {
        try {
            const Family family = kEnsembleOrder[static_cast<std::size_t>(slot)];
            MlpConfig cfg;
            cfg.input_size = static_cast<int>(family_length(family));
            cfg.hidden_size = default_hidden_size(family);
            cfg.output_size = m;
            cfg.learning_rate = opts.learning_rate;
            cfg.momentum = opts.momentum;
            cfg.max_epochs = opts.max_epochs;
            cfg.target_sse = opts.target_sse;
            cfg.seed = derive_seed(opts.seed, static_cast<std::uint64_t>(fold_index),
                                   0x100 + static_cast<std::uint64_t>(slot));
            MlpModel model = init_mlp(cfg);

            std::vector<Sample> fit_set;
            fit_set.reserve(fit_ids.size());
            for (const std::string& id : fit_ids) {
                const std::size_t i = by_id.at(id);
                Sample s;
                s.input = apply_normalizer(fold.normalizer,
                                           bundles[i][static_cast<std::size_t>(family)]);
                s.target.assign(static_cast<std::size_t>(m), 0.0);
                s.target[static_cast<std::size_t>(ds.samples[i].label)] = 1.0;
                fit_set.push_back(std::move(s));
            }
            train(model, fit_set);

            std::size_t correct = 0;
            for (const std::string& id : val_ids) {
                const std::size_t i = by_id.at(id);
                const auto conf = predict_confidences(
                    model, apply_normalizer(fold.normalizer,
                                            bundles[i][static_cast<std::size_t>(family)]));
                if (argmax_index(conf) == ds.samples[i].label) ++correct;
            }
            const double pct = 100.0 * static_cast<double>(correct) / static_cast<double>(val_ids.size());
            fold.d[static_cast<std::size_t>(slot)] = std::max(pct, 1e-3);
            fold.models[static_cast<std::size_t>(slot)] = std::move(model);
        } catch (...) {
            failures[static_cast<std::size_t>(slot)] = std::current_exception();
        }
    };

    if (resolve_threads(opts.threads) > 1) {
        std::vector<std::thread> pool;
        for (int slot = 0; slot < kFamilyCount; ++slot) pool.emplace_back(train_family, slot);
        for (std::thread& t : pool) t.join();
    } else {
        for (int slot = 0; slot < kFamilyCount; ++slot) train_family(slot);
    }
    for (const std::exception_ptr& e : failures)
        if (e) std::rethrow_exception(e);

    fold.weights = compute_weights(fold.d);
    return fold;
}

/// Runs the selected protocol and returns one TrainedFold per split
/// (three for cross-validation, one for the holdout).
inline std::vector<TrainedFold> train_protocol(const Dataset& ds,
                                               const std::vector<FeatureBundle>& bundles,
                                               const ProtocolOptions& opts) {
    std::vector<TrainedFold> folds;
    if (opts.protocol == Protocol::ThreeFold) {
        const FoldPlan plan = three_fold_split(ds.samples, opts.seed);
        for (int f = 0; f < 3; ++f) {
            std::vector<std::string> train_ids;
            for (int p = 0; p < 3; ++p)
                if (p != f)
                    train_ids.insert(train_ids.end(), plan.parts[static_cast<std::size_t>(p)].begin(),
                                     plan.parts[static_cast<std::size_t>(p)].end());
            folds.push_back(train_fold(ds, bundles, std::move(train_ids),
                                       plan.parts[static_cast<std::size_t>(f)], opts, f));
        }
    } else {
        auto [train_ids, test_ids] = holdout_split(ds.samples, opts.seed, opts.holdout_train_fraction);
        folds.push_back(train_fold(ds, bundles, std::move(train_ids), std::move(test_ids), opts, 0));
    }
    return folds;
}

/// Confidence vectors of all four classifiers for one feature bundle,
/// in kEnsembleOrder.
inline std::array<std::vector<double>, kFamilyCount> fold_confidences(const TrainedFold& fold,
                                                                      const FeatureBundle& bundle) {
    std::array<std::vector<double>, kFamilyCount> conf;
    for (int slot = 0; slot < kFamilyCount; ++slot) {
        const Family family = kEnsembleOrder[static_cast<std::size_t>(slot)];
        conf[static_cast<std::size_t>(slot)] = predict_confidences(
            fold.models[static_cast<std::size_t>(slot)],
            apply_normalizer(fold.normalizer, bundle[static_cast<std::size_t>(family)]));
    }
    return conf;
}

/// Evaluates every fold on its own test ids and pools the counts.
inline EvalReport evaluate_protocol(const Dataset& ds, const std::vector<FeatureBundle>& bundles,
                                    const std::vector<TrainedFold>& folds, FusionMode mode) {
    const auto by_id = detail::index_by_id(ds.samples);
    EvalReport report;
    report.mode = mode;
    report.label_map = ds.label_map;
    report.confusion.assign(ds.label_map.size(), std::vector<long>(ds.label_map.size(), 0));
    for (const TrainedFold& fold : folds) {
        std::vector<std::array<std::vector<double>, kFamilyCount>> conf;
        std::vector<int> labels;
        conf.reserve(fold.test_ids.size());
        for (const std::string& id : fold.test_ids) {
            const auto it = by_id.find(id);
            if (it == by_id.end())
                throw Error("MissingSample", id + " is referenced by the manifest but absent from the dataset");
            conf.push_back(fold_confidences(fold, bundles[it->second]));
            labels.push_back(ds.samples[it->second].label);
        }
        const EvalCounts counts =
            evaluate_decisions(conf, labels, fold.weights, mode, &report.confusion);
        report.folds.push_back(counts);
        report.pooled += counts;
    }
    return report;
}

}  // namespace glyphrec
