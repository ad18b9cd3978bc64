// Writes a synthetic glyph corpus in the dataset layout the main tool reads.
// Useful for demos and for exercising the full pipeline without real scans.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "glyphrec/synth.hpp"

int main(int argc, char** argv) {
    CLI::App app{"synthetic glyph corpus generator"};
    std::string out;
    int per_class = 60;
    std::uint64_t seed = 1;
    app.add_option("--out", out, "output dataset root")->required();
    app.add_option("--per-class", per_class, "samples per glyph class")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        glyphrec::write_synthetic_corpus(out, per_class, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cout << "wrote " << glyphrec::glyph_class_names().size() << " classes x " << per_class
              << " samples under " << out << "\n";
    return 0;
}
