#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "glyphrec/dataset.hpp"
#include "glyphrec/ensemble.hpp"
#include "glyphrec/evaluate.hpp"
#include "glyphrec/mlp.hpp"

namespace glyphrec {

// Keys keep insertion order so equal inputs serialize to equal bytes.
using Json = nlohmann::ordered_json;

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("WriteFailed", path.string() + ": cannot open for writing");
    out << j.dump(2) << "\n";
}

inline Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("ReadFailed", path.string() + ": cannot open");
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("ReadFailed", path.string() + ": " + e.what());
    }
    return j;
}

// ---------------------------------------------------------------------------
// MLP models
// ---------------------------------------------------------------------------

inline Json model_to_json(const MlpModel& m, Family family,
                          const std::vector<std::string>& labels) {
    Json j;
    j["kind"] = "glyphrec-mlp";
    j["family"] = family_name(family);
    j["labels"] = labels;
    j["config"] = {{"input_size", m.config.input_size},
                   {"hidden_size", m.config.hidden_size},
                   {"output_size", m.config.output_size},
                   {"learning_rate", m.config.learning_rate},
                   {"momentum", m.config.momentum},
                   {"max_epochs", m.config.max_epochs},
                   {"seed", m.config.seed},
                   {"target_sse", m.config.target_sse}};
    j["w1"] = m.w1;
    j["b1"] = m.b1;
    j["w2"] = m.w2;
    j["b2"] = m.b2;
    return j;
}

inline MlpModel model_from_json(const Json& j, Family* family_out = nullptr,
                                std::vector<std::string>* labels_out = nullptr) {
    if (j.value("kind", "") != "glyphrec-mlp") throw Error("ReadFailed", "not a model file");
    MlpModel m;
    const Json& c = j.at("config");
    m.config.input_size = c.at("input_size").get<int>();
    m.config.hidden_size = c.at("hidden_size").get<int>();
    m.config.output_size = c.at("output_size").get<int>();
    m.config.learning_rate = c.at("learning_rate").get<double>();
    m.config.momentum = c.at("momentum").get<double>();
    m.config.max_epochs = c.at("max_epochs").get<int>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.config.target_sse = c.at("target_sse").get<double>();
    m.config.validate();
    m.w1 = j.at("w1").get<std::vector<double>>();
    m.b1 = j.at("b1").get<std::vector<double>>();
    m.w2 = j.at("w2").get<std::vector<double>>();
    m.b2 = j.at("b2").get<std::vector<double>>();
    const auto nh = static_cast<std::size_t>(m.config.hidden_size);
    const auto no = static_cast<std::size_t>(m.config.output_size);
    if (m.w1.size() != nh * static_cast<std::size_t>(m.config.input_size) || m.b1.size() != nh ||
        m.w2.size() != no * nh || m.b2.size() != no)
        throw Error("ReadFailed", "model weight arrays do not match the config");
    m.v_w1.assign(m.w1.size(), 0.0);
    m.v_b1.assign(m.b1.size(), 0.0);
    m.v_w2.assign(m.w2.size(), 0.0);
    m.v_b2.assign(m.b2.size(), 0.0);
    if (family_out) {
        const std::string f = j.value("family", "");
        for (Family fam : kAllFamilies)
            if (f == family_name(fam)) *family_out = fam;
    }
    if (labels_out) *labels_out = j.value("labels", std::vector<std::string>{});
    return m;
}

// ---------------------------------------------------------------------------
// Normalizer
// ---------------------------------------------------------------------------

inline Json normalizer_to_json(const Normalizer& n) {
    Json j;
    j["kind"] = "glyphrec-normalizer";
    for (Family f : kAllFamilies) {
        const auto fi = static_cast<std::size_t>(f);
        j["families"][family_name(f)] = {{"min", n.lo[fi]}, {"max", n.hi[fi]}};
    }
    return j;
}

inline Normalizer normalizer_from_json(const Json& j) {
    if (j.value("kind", "") != "glyphrec-normalizer")
        throw Error("ReadFailed", "not a normalizer file");
    Normalizer n;
    for (Family f : kAllFamilies) {
        const auto fi = static_cast<std::size_t>(f);
        const Json& fam = j.at("families").at(family_name(f));
        n.lo[fi] = fam.at("min").get<std::vector<double>>();
        n.hi[fi] = fam.at("max").get<std::vector<double>>();
        if (n.lo[fi].size() != family_length(f) || n.hi[fi].size() != family_length(f))
            throw Error("ReadFailed", "normalizer dimensions do not match the family");
    }
    return n;
}

// ---------------------------------------------------------------------------
// Ensemble manifest
// ---------------------------------------------------------------------------

/// One trained fold as referenced from the manifest: model files, the
/// validation accuracies d they earned, the fusion weights derived from
/// them, the fitted normalizer, and the ids this fold is tested on.
struct ManifestFold {
    std::array<std::string, kFamilyCount> model_paths;  ///< kEnsembleOrder
    std::array<double, kFamilyCount> d{};
    std::array<double, kFamilyCount> omega{};
    std::string normalizer_path;
    std::vector<std::string> test_ids;
};

struct EnsembleManifest {
    std::string protocol;  ///< "3fold" or "holdout"
    std::uint64_t seed = 0;
    FusionMode fusion_mode = FusionMode::ConfidenceSum;
    std::vector<std::string> labels;
    std::vector<ManifestFold> folds;
};

inline Json manifest_to_json(const EnsembleManifest& m) {
    Json j;
    j["kind"] = "glyphrec-ensemble";
    j["protocol"] = m.protocol;
    j["seed"] = m.seed;
    j["fusion_mode"] = fusion_mode_name(m.fusion_mode);
    j["labels"] = m.labels;
    j["folds"] = Json::array();
    for (const ManifestFold& f : m.folds) {
        Json jf;
        for (int k = 0; k < kFamilyCount; ++k)
            jf["models"][family_name(kEnsembleOrder[static_cast<std::size_t>(k)])] =
                f.model_paths[static_cast<std::size_t>(k)];
        jf["d"] = f.d;
        jf["omega"] = f.omega;
        jf["normalizer"] = f.normalizer_path;
        jf["test_ids"] = f.test_ids;
        j["folds"].push_back(std::move(jf));
    }
    return j;
}

inline EnsembleManifest manifest_from_json(const Json& j) {
    if (j.value("kind", "") != "glyphrec-ensemble")
        throw Error("ReadFailed", "not an ensemble manifest");
    EnsembleManifest m;
    m.protocol = j.at("protocol").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.fusion_mode =
        j.at("fusion_mode").get<std::string>() == "vote" ? FusionMode::Vote : FusionMode::ConfidenceSum;
    m.labels = j.at("labels").get<std::vector<std::string>>();
    for (const Json& jf : j.at("folds")) {
        ManifestFold f;
        for (int k = 0; k < kFamilyCount; ++k)
            f.model_paths[static_cast<std::size_t>(k)] =
                jf.at("models").at(family_name(kEnsembleOrder[static_cast<std::size_t>(k)])).get<std::string>();
        for (int k = 0; k < kFamilyCount; ++k) {
            f.d[static_cast<std::size_t>(k)] = jf.at("d")[static_cast<std::size_t>(k)].get<double>();
            f.omega[static_cast<std::size_t>(k)] = jf.at("omega")[static_cast<std::size_t>(k)].get<double>();
        }
        f.normalizer_path = jf.at("normalizer").get<std::string>();
        f.test_ids = jf.at("test_ids").get<std::vector<std::string>>();
        m.folds.push_back(std::move(f));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Evaluation report
// ---------------------------------------------------------------------------

inline double round2(double v) { return std::round(v * 100.0) / 100.0; }

inline Json report_to_json(const EvalReport& r) {
    auto counts_to_json = [&](const EvalCounts& c) {
        Json j;
        j["n"] = c.n;
        for (int k = 0; k < kFamilyCount; ++k)
            j["classifier_top1"][family_name(kEnsembleOrder[static_cast<std::size_t>(k)])] =
                round2(c.classifier_pct(k));
        for (int k = 1; k <= r.top_k_limit(); ++k)
            j["topk"]["top" + std::to_string(k)] = round2(c.topk_pct(k));
        j["union_top1"] = round2(c.union_pct());
        return j;
    };
    Json j;
    j["kind"] = "glyphrec-report";
    j["fusion_mode"] = fusion_mode_name(r.mode);
    j["labels"] = r.label_map;
    j["pooled"] = counts_to_json(r.pooled);
    j["folds"] = Json::array();
    for (const EvalCounts& c : r.folds) j["folds"].push_back(counts_to_json(c));
    j["confusion"] = r.confusion;
    return j;
}

}  // namespace glyphrec
