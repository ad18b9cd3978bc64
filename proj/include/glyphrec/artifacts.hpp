#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "glyphrec/serialize.hpp"
#include "glyphrec/training.hpp"

namespace glyphrec {

/// Writes trained folds under `dir`: one subdirectory per fold holding the
/// four model files and the normalizer, plus `ensemble.json` tying them
/// together. Returns the manifest path.
inline std::filesystem::path save_artifacts(const std::filesystem::path& dir,
                                            const std::vector<std::string>& labels,
                                            const std::vector<TrainedFold>& folds,
                                            const ProtocolOptions& opts) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    EnsembleManifest manifest;
    manifest.protocol = protocol_name(opts.protocol);
    manifest.seed = opts.seed;
    manifest.fusion_mode = opts.fusion;
    manifest.labels = labels;

    for (std::size_t f = 0; f < folds.size(); ++f) {
        const std::string fold_name = "fold" + std::to_string(f);
        fs::create_directories(dir / fold_name);
        ManifestFold mf;
        for (int slot = 0; slot < kFamilyCount; ++slot) {
            const Family family = kEnsembleOrder[static_cast<std::size_t>(slot)];
            const std::string rel = fold_name + "/" + family_name(family) + ".json";
            write_json_file(dir / rel,
                            model_to_json(folds[f].models[static_cast<std::size_t>(slot)], family, labels));
            mf.model_paths[static_cast<std::size_t>(slot)] = rel;
        }
        const std::string norm_rel = fold_name + "/normalizer.json";
        write_json_file(dir / norm_rel, normalizer_to_json(folds[f].normalizer));
        mf.normalizer_path = norm_rel;
        mf.d = folds[f].d;
        mf.omega = folds[f].weights.omega;
        mf.test_ids = folds[f].test_ids;
        manifest.folds.push_back(std::move(mf));
    }
    const fs::path manifest_path = dir / "ensemble.json";
    write_json_file(manifest_path, manifest_to_json(manifest));
    return manifest_path;
}

struct LoadedEnsemble {
    EnsembleManifest manifest;
    std::vector<TrainedFold> folds;  ///< train_ids are not stored on disk
};

inline LoadedEnsemble load_artifacts(const std::filesystem::path& dir) {
    LoadedEnsemble e;
    e.manifest = manifest_from_json(read_json_file(dir / "ensemble.json"));
    for (const ManifestFold& mf : e.manifest.folds) {
        TrainedFold fold;
        for (int slot = 0; slot < kFamilyCount; ++slot)
            fold.models[static_cast<std::size_t>(slot)] =
                model_from_json(read_json_file(dir / mf.model_paths[static_cast<std::size_t>(slot)]));
        fold.normalizer = normalizer_from_json(read_json_file(dir / mf.normalizer_path));
        fold.d = mf.d;
        fold.weights.omega = mf.omega;
        fold.weights.source_accuracies = mf.d;
        fold.test_ids = mf.test_ids;
        e.folds.push_back(std::move(fold));
    }
    return e;
}

}  // namespace glyphrec
