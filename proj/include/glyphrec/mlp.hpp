#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "glyphrec/error.hpp"
#include "glyphrec/rng.hpp"

namespace glyphrec {

struct MlpConfig {
    int input_size = 0;
    int hidden_size = 0;
    int output_size = 0;
    double learning_rate = 0.8;
    double momentum = 0.7;
    int max_epochs = 300;
    std::uint64_t seed = 0;
    double target_sse = 0.0;  ///< epoch SSE floor; 0 disables early stopping

    void validate() const {
        if (input_size < 1 || hidden_size < 1 || output_size < 1)
            throw Error("BadConfig", "layer sizes must be >= 1");
        if (learning_rate <= 0.0) throw Error("BadConfig", "learning rate must be positive");
        if (momentum < 0.0 || momentum >= 1.0) throw Error("BadConfig", "momentum must be in [0, 1)");
    }

    bool operator==(const MlpConfig&) const = default;
};

/// Three-layer sigmoid network. Weight matrices are row-major:
/// w1[h * input_size + i] connects input i to hidden h,
/// w2[o * hidden_size + h] connects hidden h to output o.
struct MlpModel {
    MlpConfig config;
    std::vector<double> w1, b1, w2, b2;
    std::vector<double> v_w1, v_b1, v_w2, v_b2;  ///< momentum buffers

    bool operator==(const MlpModel&) const = default;
};

struct TrainReport {
    int epochs_run = 0;
    double final_sse = 0.0;
    std::vector<double> sse_trace;
};

struct Sample {
    std::vector<double> input;
    std::vector<double> target;
};

inline double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

/// Builds a model with weights and biases drawn uniformly from [-0.5, 0.5]
/// and zeroed momentum buffers; identical seeds give identical models.
inline MlpModel init_mlp(const MlpConfig& config) {
    config.validate();
    MlpModel m;
    m.config = config;
    Rng rng(config.seed);
    const std::size_t n1 = static_cast<std::size_t>(config.hidden_size) * config.input_size;
    const std::size_t n2 = static_cast<std::size_t>(config.output_size) * config.hidden_size;
    auto draw = [&rng](std::size_t n) {
        std::vector<double> v(n);
        for (double& x : v) x = rng.uniform(-0.5, 0.5);
        return v;
    };
    m.w1 = draw(n1);
    m.b1 = draw(static_cast<std::size_t>(config.hidden_size));
    m.w2 = draw(n2);
    m.b2 = draw(static_cast<std::size_t>(config.output_size));
    m.v_w1.assign(n1, 0.0);
    m.v_b1.assign(static_cast<std::size_t>(config.hidden_size), 0.0);
    m.v_w2.assign(n2, 0.0);
    m.v_b2.assign(static_cast<std::size_t>(config.output_size), 0.0);
    return m;
}

namespace detail {

inline void forward_layers(const MlpModel& m, const std::vector<double>& x,
                           std::vector<double>& hidden, std::vector<double>& output) {
    const int in = m.config.input_size, hid = m.config.hidden_size, out = m.config.output_size;
    hidden.resize(static_cast<std::size_t>(hid));
    output.resize(static_cast<std::size_t>(out));
    for (int h = 0; h < hid; ++h) {
        double acc = m.b1[static_cast<std::size_t>(h)];
        const double* w = &m.w1[static_cast<std::size_t>(h) * in];
        for (int i = 0; i < in; ++i) acc += w[i] * x[static_cast<std::size_t>(i)];
        hidden[static_cast<std::size_t>(h)] = sigmoid(acc);
    }
    for (int o = 0; o < out; ++o) {
        double acc = m.b2[static_cast<std::size_t>(o)];
        const double* w = &m.w2[static_cast<std::size_t>(o) * hid];
        for (int h = 0; h < hid; ++h) acc += w[h] * hidden[static_cast<std::size_t>(h)];
        output[static_cast<std::size_t>(o)] = sigmoid(acc);
    }
}

}  // namespace detail

/// hidden = sigmoid(W1 x + b1), output = sigmoid(W2 hidden + b2).
inline std::vector<double> forward(const MlpModel& m, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != m.config.input_size)
        throw DimensionMismatch("input length does not match the network");
    std::vector<double> hidden, output;
    detail::forward_layers(m, x, hidden, output);
    return output;
}

/// Raw sigmoid outputs; callers pick the class with argmax_index().
inline std::vector<double> predict_confidences(const MlpModel& m, const std::vector<double>& x) {
    return forward(m, x);
}

/// Index of the largest value; ties resolve to the lowest index.
inline int argmax_index(const std::vector<double>& values) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i)
        if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)]) best = i;
    return best;
}

/// Stochastic backpropagation with momentum. Samples are visited in a
/// freshly shuffled order each epoch (seeded from the model seed); each
/// visit applies dw = -lr * dE/dw + momentum * dw_prev with
/// E = 1/2 * sum((out - target)^2). The epoch SSE trace records the sum of
/// per-sample E values; training stops at max_epochs or once the epoch SSE
/// falls to target_sse.
inline TrainReport train(MlpModel& m, const std::vector<Sample>& samples) {
    const int in = m.config.input_size, hid = m.config.hidden_size, out = m.config.output_size;
    for (const Sample& s : samples) {
        if (static_cast<int>(s.input.size()) != in)
            throw DimensionMismatch("training input length does not match the network");
        if (static_cast<int>(s.target.size()) != out)
            throw DimensionMismatch("training target length does not match the network");
    }

    TrainReport report;
    if (samples.empty()) return report;

    Rng order_rng(derive_seed(m.config.seed, 0x51, 0xe9));
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::vector<double> hidden, output;
    std::vector<double> delta_out(static_cast<std::size_t>(out));
    std::vector<double> delta_hid(static_cast<std::size_t>(hid));

    for (int epoch = 0; epoch < m.config.max_epochs; ++epoch) {
        order_rng.shuffle(order);
        double sse = 0.0;
        for (std::size_t idx : order) {
            const Sample& s = samples[idx];
            detail::forward_layers(m, s.input, hidden, output);

            double err2 = 0.0;
            for (int o = 0; o < out; ++o) {
                const double y = output[static_cast<std::size_t>(o)];
                const double e = y - s.target[static_cast<std::size_t>(o)];
                err2 += e * e;
                delta_out[static_cast<std::size_t>(o)] = e * y * (1.0 - y);
            }
            sse += 0.5 * err2;

            for (int h = 0; h < hid; ++h) {
                double acc = 0.0;
                for (int o = 0; o < out; ++o)
                    acc += m.w2[static_cast<std::size_t>(o) * hid + h] * delta_out[static_cast<std::size_t>(o)];
                const double yh = hidden[static_cast<std::size_t>(h)];
                delta_hid[static_cast<std::size_t>(h)] = acc * yh * (1.0 - yh);
            }

            const double lr = m.config.learning_rate, mom = m.config.momentum;
            for (int o = 0; o < out; ++o) {
                const double d = delta_out[static_cast<std::size_t>(o)];
                double* w = &m.w2[static_cast<std::size_t>(o) * hid];
                double* v = &m.v_w2[static_cast<std::size_t>(o) * hid];
                for (int h = 0; h < hid; ++h) {
                    v[h] = -lr * d * hidden[static_cast<std::size_t>(h)] + mom * v[h];
                    w[h] += v[h];
                }
                auto& vb = m.v_b2[static_cast<std::size_t>(o)];
                vb = -lr * d + mom * vb;
                m.b2[static_cast<std::size_t>(o)] += vb;
            }
            for (int h = 0; h < hid; ++h) {
                const double d = delta_hid[static_cast<std::size_t>(h)];
                double* w = &m.w1[static_cast<std::size_t>(h) * in];
                double* v = &m.v_w1[static_cast<std::size_t>(h) * in];
                for (int i = 0; i < in; ++i) {
                    v[i] = -lr * d * s.input[static_cast<std::size_t>(i)] + mom * v[i];
                    w[i] += v[i];
                }
                auto& vb = m.v_b1[static_cast<std::size_t>(h)];
                vb = -lr * d + mom * vb;
                m.b1[static_cast<std::size_t>(h)] += vb;
            }
        }
        if (!std::isfinite(sse)) throw NonFiniteLoss("epoch SSE diverged");
        report.sse_trace.push_back(sse);
        report.epochs_run = epoch + 1;
        report.final_sse = sse;
        if (m.config.target_sse > 0.0 && sse <= m.config.target_sse) break;
    }
    return report;
}

}  // namespace glyphrec
