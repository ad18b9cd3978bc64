#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "glyphrec/mlp.hpp"
#include "support/oracles.hpp"

using namespace glyphrec;

namespace {

MlpConfig small_config(int in, int hid, int out, std::uint64_t seed) {
    MlpConfig cfg;
    cfg.input_size = in;
    cfg.hidden_size = hid;
    cfg.output_size = out;
    cfg.seed = seed;
    return cfg;
}

std::vector<Sample> random_batch(Rng& rng, int in, int out, int n) {
    std::vector<Sample> batch;
    for (int i = 0; i < n; ++i) {
        Sample s;
        for (int j = 0; j < in; ++j) s.input.push_back(rng.uniform(-1.0, 1.0));
        s.target.assign(static_cast<std::size_t>(out), 0.0);
        s.target[rng.below(static_cast<std::size_t>(out))] = 1.0;
        batch.push_back(std::move(s));
    }
    return batch;
}

}  // namespace

TEST_CASE("initialization") {
    SECTION("same seed, same model") {
        const MlpModel a = init_mlp(small_config(5, 7, 3, 99));
        const MlpModel b = init_mlp(small_config(5, 7, 3, 99));
        REQUIRE(a == b);
        const MlpModel c = init_mlp(small_config(5, 7, 3, 100));
        REQUIRE_FALSE(a == c);
    }
    SECTION("2-2-1 network has nine parameters") {
        const MlpModel m = init_mlp(small_config(2, 2, 1, 1));
        REQUIRE(m.w1.size() + m.b1.size() + m.w2.size() + m.b2.size() == 9);
    }
    SECTION("every parameter starts inside [-0.5, 0.5] with zero momentum") {
        const MlpModel m = init_mlp(small_config(10, 9, 8, 7));
        for (const auto* vec : {&m.w1, &m.b1, &m.w2, &m.b2})
            for (double v : *vec) {
                REQUIRE(v >= -0.5);
                REQUIRE(v <= 0.5);
            }
        for (const auto* vec : {&m.v_w1, &m.v_b1, &m.v_w2, &m.v_b2})
            for (double v : *vec) REQUIRE(v == 0.0);
    }
}

TEST_CASE("forward pass") {
    SECTION("all-zero parameters emit one half everywhere") {
        MlpModel m = init_mlp(small_config(4, 3, 2, 1));
        for (auto* vec : {&m.w1, &m.b1, &m.w2, &m.b2}) std::fill(vec->begin(), vec->end(), 0.0);
        for (double v : forward(m, {1.0, -2.0, 0.5, 3.0})) REQUIRE(v == 0.5);
    }
    SECTION("1-1-1 identity-weight chain") {
        MlpModel m = init_mlp(small_config(1, 1, 1, 1));
        m.w1 = {1.0};
        m.b1 = {0.0};
        m.w2 = {1.0};
        m.b2 = {0.0};
        const auto out = forward(m, {0.0});
        // sigmoid(sigmoid(0)) = sigmoid(0.5)
        REQUIRE(out[0] == Catch::Approx(0.62245933120185459).epsilon(1e-12));
    }
    SECTION("wrong input length is rejected") {
        const MlpModel m = init_mlp(small_config(3, 2, 2, 1));
        REQUIRE_THROWS_AS(forward(m, {1.0, 2.0}), DimensionMismatch);
    }
    SECTION("outputs stay strictly inside (0,1)") {
        Rng rng(5);
        const MlpModel m = init_mlp(small_config(6, 8, 5, 11));
        for (int i = 0; i < 50; ++i) {
            std::vector<double> x;
            for (int j = 0; j < 6; ++j) x.push_back(rng.uniform(-20.0, 20.0));
            for (double v : forward(m, x)) {
                REQUIRE(v > 0.0);
                REQUIRE(v < 1.0);
            }
        }
    }
}

TEST_CASE("training") {
    SECTION("a target equal to the output leaves the weights untouched") {
        MlpConfig cfg = small_config(3, 4, 2, 21);
        cfg.max_epochs = 1;
        MlpModel m = init_mlp(cfg);
        const std::vector<double> x = {0.3, -0.7, 0.9};
        const MlpModel before = m;
        train(m, {{x, forward(m, x)}});
        REQUIRE(m == before);
    }

    SECTION("backpropagation matches central finite differences") {
        Rng rng(31);
        MlpConfig cfg = small_config(3, 5, 4, 77);
        cfg.momentum = 0.0;
        cfg.learning_rate = 1.0;
        cfg.max_epochs = 1;
        const auto batch = random_batch(rng, 3, 4, 7);
        const MlpModel reference = init_mlp(cfg);

        // With momentum 0, lr 1 and a single sample, one epoch moves every
        // weight by exactly -dE/dw at the reference point, so the batch
        // gradient is the sum of per-sample weight deltas.
        std::vector<MlpModel> probes;
        for (const Sample& s : batch) {
            MlpModel probe = reference;
            train(probe, {s});
            probes.push_back(std::move(probe));
        }

        const double eps = 1e-4;
        auto check = [&](auto member) {
            MlpModel numeric = reference;
            auto& vec = numeric.*member;
            for (std::size_t i = 0; i < vec.size(); ++i) {
                const double expect = oracles::central_difference(numeric, vec[i], batch, eps);
                double analytic = 0.0;
                for (const MlpModel& probe : probes)
                    analytic += (reference.*member)[i] - (probe.*member)[i];
                const double denom = std::max({std::abs(expect), std::abs(analytic), 1e-4});
                REQUIRE(std::abs(expect - analytic) / denom < 1e-4);
            }
        };
        check(&MlpModel::w1);
        check(&MlpModel::b1);
        check(&MlpModel::w2);
        check(&MlpModel::b2);
    }

    SECTION("learns XOR for most seeds") {
        const std::vector<Sample> xor_set = {
            {{0.0, 0.0}, {0.0}}, {{0.0, 1.0}, {1.0}}, {{1.0, 0.0}, {1.0}}, {{1.0, 1.0}, {0.0}}};
        int converged = 0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            MlpConfig cfg = small_config(2, 4, 1, seed);
            cfg.max_epochs = 5000;
            cfg.target_sse = 0.05;
            MlpModel m = init_mlp(cfg);
            const TrainReport report = train(m, xor_set);
            REQUIRE(report.sse_trace.size() == static_cast<std::size_t>(report.epochs_run));
            if (report.final_sse < 0.05) ++converged;
        }
        REQUIRE(converged >= 8);
    }

    SECTION("separable two-class toy set trains quickly for most seeds") {
        Rng rng(3);
        std::vector<Sample> toy;
        for (int i = 0; i < 20; ++i) {
            const int cls = i % 2;
            Sample s;
            s.input = {rng.uniform(0.0, 0.4) + 0.6 * cls, rng.uniform(0.0, 0.4) + 0.6 * cls};
            s.target = cls ? std::vector<double>{0.0, 1.0} : std::vector<double>{1.0, 0.0};
            toy.push_back(std::move(s));
        }
        int converged = 0;
        for (std::uint64_t seed = 100; seed < 110; ++seed) {
            MlpConfig cfg = small_config(2, 4, 2, seed);
            cfg.max_epochs = 2000;
            cfg.target_sse = 0.1;
            MlpModel m = init_mlp(cfg);
            if (train(m, toy).final_sse < 0.1) ++converged;
        }
        REQUIRE(converged >= 8);
    }

    SECTION("deterministic given config, seed and samples") {
        Rng rng(41);
        const auto batch = random_batch(rng, 4, 3, 12);
        MlpConfig cfg = small_config(4, 6, 3, 17);
        cfg.max_epochs = 25;
        MlpModel a = init_mlp(cfg), b = init_mlp(cfg);
        const TrainReport ra = train(a, batch), rb = train(b, batch);
        REQUIRE(a == b);
        REQUIRE(ra.sse_trace == rb.sse_trace);
    }

    SECTION("dimension mismatches are rejected") {
        MlpModel m = init_mlp(small_config(3, 4, 2, 5));
        REQUIRE_THROWS_AS(train(m, {{{1.0, 2.0}, {1.0, 0.0}}}), DimensionMismatch);
        REQUIRE_THROWS_AS(train(m, {{{1.0, 2.0, 3.0}, {1.0}}}), DimensionMismatch);
    }

    SECTION("a non-finite state trips the divergence guard") {
        Rng rng(43);
        MlpConfig cfg = small_config(2, 4, 2, 3);
        cfg.max_epochs = 5;
        MlpModel m = init_mlp(cfg);
        m.w1[0] = std::numeric_limits<double>::quiet_NaN();
        const auto batch = random_batch(rng, 2, 2, 6);
        REQUIRE_THROWS_AS(train(m, batch), NonFiniteLoss);
    }
}

TEST_CASE("prediction") {
    SECTION("argmax picks the strongest class") {
        REQUIRE(argmax_index({0.1, 0.9, 0.3}) == 1);
    }
    SECTION("exact ties resolve to the lowest index") {
        REQUIRE(argmax_index({0.5, 0.5}) == 0);
        REQUIRE(argmax_index({0.2, 0.7, 0.7}) == 1);
    }
    SECTION("an all-zero network ties every class") {
        MlpModel m = init_mlp(small_config(3, 2, 4, 1));
        for (auto* vec : {&m.w1, &m.b1, &m.w2, &m.b2}) std::fill(vec->begin(), vec->end(), 0.0);
        const auto conf = predict_confidences(m, {0.1, 0.2, 0.3});
        REQUIRE(argmax_index(conf) == 0);
        for (double v : conf) REQUIRE(v == 0.5);
    }
}
