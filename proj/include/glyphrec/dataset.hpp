#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "glyphrec/error.hpp"
#include "glyphrec/features.hpp"
#include "glyphrec/rng.hpp"

namespace glyphrec {

struct LabeledSample {
    std::string id;               ///< class_name/file_name, unique in the dataset
    int label = 0;
    std::filesystem::path path;
};

struct Dataset {
    std::vector<LabeledSample> samples;
    std::vector<std::string> label_map;  ///< sorted class directory names
};

/// Loads `root/<class_name>/<image>.{png,pgm}`. Classes are the sorted
/// subdirectory names; samples are ordered lexicographically by path.
/// Files that are not readable images raise UnreadableImage unless
/// `skip_unreadable` is set, in which case they are recorded in
/// `skipped` (when given) and ignored.
inline Dataset load_dataset(const std::filesystem::path& root, bool skip_unreadable = false,
                            std::vector<std::string>* skipped = nullptr) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) throw EmptyDataset(root.string() + ": not a directory");

    Dataset ds;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory()) ds.label_map.push_back(entry.path().filename().string());
    std::sort(ds.label_map.begin(), ds.label_map.end());
    if (ds.label_map.empty()) throw EmptyDataset(root.string() + ": no class directories");

    for (int label = 0; label < static_cast<int>(ds.label_map.size()); ++label) {
        const fs::path class_dir = root / ds.label_map[static_cast<std::size_t>(label)];
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(class_dir))
            if (entry.is_regular_file()) files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const fs::path& file : files) {
            const std::string ext = file.extension().string();
            std::string problem;
            if (ext != ".png" && ext != ".pgm") {
                problem = "unsupported extension";
            } else {
                // Cheap readability probe; decode errors still surface when
                // the image is actually read.
                std::ifstream probe(file, std::ios::binary);
                char magic[2] = {0, 0};
                probe.read(magic, 2);
                const bool pgm = magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5');
                const bool png = static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P';
                if (!probe || (!pgm && !png)) problem = "not a PGM or PNG image";
            }
            if (!problem.empty()) {
                if (skip_unreadable) {
                    if (skipped) skipped->push_back(file.string());
                    continue;
                }
                throw UnreadableImage(file.string() + ": " + problem);
            }
            LabeledSample s;
            s.id = ds.label_map[static_cast<std::size_t>(label)] + "/" + file.filename().string();
            s.label = label;
            s.path = file;
            ds.samples.push_back(std::move(s));
        }
    }
    if (ds.samples.empty()) throw EmptyDataset(root.string() + ": no image files");
    return ds;
}

/// Three disjoint, stratified sample-id parts; fold i tests on part i and
/// trains on the other two.
struct FoldPlan {
    std::array<std::vector<std::string>, 3> parts;
    std::uint64_t seed = 0;
};

/// Stratified split: per class, ids are shuffled with the seed and dealt
/// round-robin to the three parts, so per-class part sizes differ by at
/// most one. Requires at least three samples of every class.
inline FoldPlan three_fold_split(const std::vector<LabeledSample>& samples, std::uint64_t seed) {
    std::map<int, std::vector<std::string>> by_class;
    for (const LabeledSample& s : samples) by_class[s.label].push_back(s.id);

    FoldPlan plan;
    plan.seed = seed;
    std::size_t class_position = 0;
    for (auto& [label, ids] : by_class) {
        if (ids.size() < 3)
            throw TooFewSamples("class " + std::to_string(label) + " has fewer than 3 samples");
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(label), 0x3f));
        rng.shuffle(ids);
        // The part receiving a class's remainder rotates with the class, so
        // the three global part sizes stay balanced too.
        for (std::size_t i = 0; i < ids.size(); ++i)
            plan.parts[(i + class_position) % 3].push_back(ids[i]);
        ++class_position;
    }
    return plan;
}

/// Stratified fixed-fraction holdout; returns (train ids, test ids).
inline std::pair<std::vector<std::string>, std::vector<std::string>> holdout_split(
    const std::vector<LabeledSample>& samples, std::uint64_t seed, double train_fraction) {
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw Error("BadConfig", "train fraction must be in (0, 1)");
    std::map<int, std::vector<std::string>> by_class;
    for (const LabeledSample& s : samples) by_class[s.label].push_back(s.id);

    std::vector<std::string> train, test;
    for (auto& [label, ids] : by_class) {
        if (ids.size() < 2)
            throw TooFewSamples("class " + std::to_string(label) + " has fewer than 2 samples");
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(label), 0x68));
        rng.shuffle(ids);
        std::size_t n_train = static_cast<std::size_t>(
            std::llround(train_fraction * static_cast<double>(ids.size())));
        n_train = std::clamp<std::size_t>(n_train, 1, ids.size() - 1);
        for (std::size_t i = 0; i < ids.size(); ++i)
            (i < n_train ? train : test).push_back(ids[i]);
    }
    return {std::move(train), std::move(test)};
}

/// Per-family, per-dimension min-max ranges fitted on training data only.
/// Applying maps values to [0, 1], clamping out-of-range inputs; a constant
/// training dimension maps everything to 0.
struct Normalizer {
    std::array<std::vector<double>, kFamilyCount> lo;
    std::array<std::vector<double>, kFamilyCount> hi;
};

inline Normalizer fit_normalizer(const std::vector<const FeatureBundle*>& train) {
    if (train.empty()) throw EmptyTrainingSet("cannot fit a normalizer on no samples");
    Normalizer n;
    for (Family f : kAllFamilies) {
        const auto fi = static_cast<std::size_t>(f);
        const std::size_t dims = family_length(f);
        n.lo[fi].assign(dims, 0.0);
        n.hi[fi].assign(dims, 0.0);
        for (std::size_t d = 0; d < dims; ++d) {
            double lo = (*train[0])[fi].values[d], hi = lo;
            for (const FeatureBundle* b : train) {
                lo = std::min(lo, (*b)[fi].values[d]);
                hi = std::max(hi, (*b)[fi].values[d]);
            }
            n.lo[fi][d] = lo;
            n.hi[fi][d] = hi;
        }
    }
    return n;
}

inline std::vector<double> apply_normalizer(const Normalizer& n, const FeatureVector& v) {
    const auto fi = static_cast<std::size_t>(v.family);
    if (v.values.size() != n.lo[fi].size())
        throw DimensionMismatch("feature vector does not match the normalizer");
    std::vector<double> out(v.values.size());
    for (std::size_t d = 0; d < v.values.size(); ++d) {
        const double lo = n.lo[fi][d], hi = n.hi[fi][d];
        if (hi <= lo) {
            out[d] = 0.0;
        } else {
            out[d] = std::clamp((v.values[d] - lo) / (hi - lo), 0.0, 1.0);
        }
    }
    return out;
}

/// Feature dump rows: `sample_id,label,family,i0..iN`, one row per
/// (sample, family), values printed with 9 significant digits. Rows are
/// ragged: each family writes exactly its own dimension count.
inline void write_feature_csv(std::ostream& out, const std::vector<LabeledSample>& samples,
                              const std::vector<FeatureBundle>& bundles) {
    out << "sample_id,label,family";
    for (std::size_t i = 0; i < family_length(Family::ChainCode); ++i) out << ",i" << i;
    out << "\n";
    char buf[40];
    for (std::size_t s = 0; s < samples.size(); ++s) {
        for (Family f : kAllFamilies) {
            out << samples[s].id << "," << samples[s].label << "," << family_name(f);
            for (double v : bundles[s][static_cast<std::size_t>(f)].values) {
                std::snprintf(buf, sizeof buf, "%.9g", v);
                out << "," << buf;
            }
            out << "\n";
        }
    }
}

}  // namespace glyphrec
