// Command line front end: feature extraction, ensemble training, evaluation
// and single-image prediction over labeled glyph image directories.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "glyphrec/artifacts.hpp"
#include "glyphrec/dataset.hpp"
#include "glyphrec/evaluate.hpp"
#include "glyphrec/pipeline.hpp"
#include "glyphrec/serialize.hpp"
#include "glyphrec/training.hpp"

namespace fs = std::filesystem;
using namespace glyphrec;

namespace {

bool debug_dump_enabled() {
    const char* v = std::getenv("GLYPH_DEBUG_DUMP");
    return v != nullptr && std::string(v) == "1";
}

FusionMode parse_mode(const std::string& mode) {
    if (mode == "vote") return FusionMode::Vote;
    if (mode == "confsum") return FusionMode::ConfidenceSum;
    throw CLI::ValidationError("--mode must be vote or confsum");
}

struct CommonTrainFlags {
    std::string protocol = "3fold";
    std::uint64_t seed = 1;
    int epochs = 300;
    double learning_rate = 0.8;
    double momentum = 0.7;
    double target_sse = 0.0;
    double holdout_fraction = 0.68;
    std::string mode = "confsum";
    unsigned threads = 0;
};

int run_extract(const std::string& data, const std::string& out, bool skip_unreadable,
                unsigned threads) {
    std::vector<std::string> skipped;
    const Dataset ds = load_dataset(data, skip_unreadable, &skipped);
    for (const std::string& s : skipped) std::cerr << "skipped: " << s << "\n";
    const fs::path debug_dir =
        debug_dump_enabled() ? fs::path(out).parent_path() / "glyph_debug" : fs::path{};
    const auto bundles = extract_bundles(ds, threads, debug_dir);
    std::ofstream file(out);
    if (!file) throw Error("WriteFailed", out + ": cannot open for writing");
    write_feature_csv(file, ds.samples, bundles);
    std::cout << "wrote " << ds.samples.size() * kFamilyCount << " feature rows for "
              << ds.samples.size() << " samples to " << out << "\n";
    return 0;
}

int run_train(const std::string& data, const std::string& out, const CommonTrainFlags& flags) {
    ProtocolOptions opts;
    opts.protocol = flags.protocol == "holdout" ? Protocol::Holdout : Protocol::ThreeFold;
    opts.seed = flags.seed;
    opts.max_epochs = flags.epochs;
    opts.learning_rate = flags.learning_rate;
    opts.momentum = flags.momentum;
    opts.target_sse = flags.target_sse;
    opts.holdout_train_fraction = flags.holdout_fraction;
    opts.fusion = parse_mode(flags.mode);
    opts.threads = flags.threads;

    const Dataset ds = load_dataset(data);
    const fs::path debug_dir = debug_dump_enabled() ? fs::path(out) / "glyph_debug" : fs::path{};
    const auto bundles = extract_bundles(ds, flags.threads, debug_dir);
    const auto folds = train_protocol(ds, bundles, opts);
    const fs::path manifest = save_artifacts(out, ds.label_map, folds, opts);

    std::cout << "trained " << folds.size() << " fold(s) on " << ds.samples.size() << " samples ("
              << ds.label_map.size() << " classes)\n";
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::cout << "fold " << f << " d:";
        for (int k = 0; k < kFamilyCount; ++k)
            std::cout << " " << family_name(kEnsembleOrder[static_cast<std::size_t>(k)]) << "="
                      << folds[f].d[static_cast<std::size_t>(k)];
        std::cout << "\n";
    }
    std::cout << "manifest: " << manifest.string() << "\n";
    return 0;
}

int run_eval(const std::string& models, const std::string& data, const std::string& mode_flag,
             const std::string& json_out, unsigned threads) {
    const LoadedEnsemble ensemble = load_artifacts(models);
    const Dataset ds = load_dataset(data);
    const fs::path debug_dir = debug_dump_enabled() ? fs::path(models) / "glyph_debug" : fs::path{};
    const auto bundles = extract_bundles(ds, threads, debug_dir);
    const FusionMode mode = mode_flag.empty() ? ensemble.manifest.fusion_mode : parse_mode(mode_flag);
    const EvalReport report = evaluate_protocol(ds, bundles, ensemble.folds, mode);
    render_report_text(std::cout, report);
    if (!json_out.empty()) write_json_file(json_out, report_to_json(report));
    return 0;
}

int run_predict(const std::string& models, const std::string& image, int top,
                const std::string& mode_flag) {
    const LoadedEnsemble ensemble = load_artifacts(models);
    if (ensemble.folds.empty()) throw Error("ReadFailed", "manifest lists no folds");
    const TrainedFold& fold = ensemble.folds.front();

    FeatureBundle bundle;
    if (debug_dump_enabled()) {
        const StageDump dump = [](const std::string& stage, const BinaryImage& img) {
            write_pgm(fs::path("glyph_debug_" + stage + ".pgm"), img);
        };
        bundle = extract_feature_bundle(read_image(image), &dump);
    } else {
        bundle = extract_feature_bundle(read_image(image));
    }

    const FusionMode mode = mode_flag.empty() ? ensemble.manifest.fusion_mode : parse_mode(mode_flag);
    const CombinedDecision decision = combine_decisions(fold_confidences(fold, bundle), fold.weights, mode);
    const int m = static_cast<int>(ensemble.manifest.labels.size());
    const int k = top > 0 ? top : std::min(5, m);
    char buf[32];
    for (int i = 0; i < static_cast<int>(rank_top_k(decision, k).size()); ++i) {
        const int cls = decision.ranked[static_cast<std::size_t>(i)];
        std::snprintf(buf, sizeof buf, "%.6f", decision.scores[static_cast<std::size_t>(cls)]);
        std::cout << i + 1 << " " << ensemble.manifest.labels[static_cast<std::size_t>(cls)] << " "
                  << buf << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"handwritten glyph recognition: features, MLP ensemble, fusion"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::string data, out, models, image, json_out, mode_flag;
    bool skip_unreadable = false;
    int top = 0;
    CommonTrainFlags flags;

    CLI::App* extract = app.add_subcommand("extract", "extract feature CSV from a dataset");
    extract->add_option("--data", data, "dataset root directory")->required();
    extract->add_option("--out", out, "output CSV path")->required();
    extract->add_flag("--skip-unreadable", skip_unreadable, "skip unreadable files instead of failing");
    extract->add_option("--threads", flags.threads, "worker threads (0 = auto)");

    CLI::App* train = app.add_subcommand("train", "train the four classifiers and write models");
    train->add_option("--data", data, "dataset root directory")->required();
    train->add_option("--out", out, "output model directory")->required();
    train->add_option("--seed", flags.seed, "random seed");
    train->add_option("--epochs", flags.epochs, "training epochs per classifier");
    train->add_option("--protocol", flags.protocol, "3fold or holdout")
        ->check(CLI::IsMember({"3fold", "holdout"}));
    train->add_option("--lr", flags.learning_rate, "learning rate");
    train->add_option("--momentum", flags.momentum, "momentum term");
    train->add_option("--target-sse", flags.target_sse, "epoch SSE early-stop floor (0 = off)");
    train->add_option("--holdout-fraction", flags.holdout_fraction, "train fraction in holdout mode");
    train->add_option("--mode", flags.mode, "default fusion mode stored in the manifest")
        ->check(CLI::IsMember({"vote", "confsum"}));
    train->add_option("--threads", flags.threads, "worker threads (0 = auto)");

    CLI::App* eval = app.add_subcommand("eval", "evaluate trained models on a dataset");
    eval->add_option("--models", models, "model directory (with ensemble.json)")->required();
    eval->add_option("--data", data, "dataset root directory")->required();
    eval->add_option("--mode", mode_flag, "fusion mode override (vote or confsum)")
        ->check(CLI::IsMember({"vote", "confsum"}));
    eval->add_option("--json", json_out, "also write the report as JSON to this path");
    eval->add_option("--threads", flags.threads, "worker threads (0 = auto)");

    CLI::App* predict = app.add_subcommand("predict", "classify a single image");
    predict->add_option("--models", models, "model directory (with ensemble.json)")->required();
    predict->add_option("image", image, "image file (PGM or PNG)")->required();
    predict->add_option("--top", top, "number of ranked classes to print");
    predict->add_option("--mode", mode_flag, "fusion mode override (vote or confsum)")
        ->check(CLI::IsMember({"vote", "confsum"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (extract->parsed()) return run_extract(data, out, skip_unreadable, flags.threads);
        if (train->parsed()) return run_train(data, out, flags);
        if (eval->parsed()) return run_eval(models, data, mode_flag, json_out, flags.threads);
        if (predict->parsed()) return run_predict(models, image, top, mode_flag);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
