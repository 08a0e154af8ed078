#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "xbarvmm/encoder.hpp"
#include "xbarvmm/matrix.hpp"

namespace xbarvmm {

struct TrainerConfig {
    int epochs = 20;
    int batch = 32;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double init_range = 0.1;  // latent weights start uniform in ±init_range
    bool bias = false;        // extra always-on input encoded at 255

    void validate(int samples) const;
};

struct AdamState {
    Matrix first_moment;
    Matrix second_moment;
    long step = 0;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState init(int rows, int cols, const TrainerConfig& cfg) {
        AdamState s;
        s.first_moment = Matrix(rows, cols);
        s.second_moment = Matrix(rows, cols);
        s.learning_rate = cfg.learning_rate;
        s.beta1 = cfg.beta1;
        s.beta2 = cfg.beta2;
        s.epsilon = cfg.epsilon;
        return s;
    }
};

struct TrainedModel {
    Matrix latent_weights;  // K × F' reals in [-1, 1]
    Matrix binary_weights;  // sign(latent), sign(0) = +1
    NormalizationStats stats;
    int classes = 0;
    bool bias = false;
    TrainerConfig hyper;
    std::uint64_t seed = 0;
    // evaluation metrics recorded by the caller (e.g. train/test accuracy);
    // persisted with the model when present
    std::map<std::string, double> metrics;

    int features_in() const { return stats.features(); }  // before bias column
};

// ±1 one-hot rows: +1 for the true class, −1 elsewhere.
Matrix one_hot_encode(std::span<const int> labels, int classes);

// Elementwise sign with sign(0) = +1 (fixed tie rule).
Matrix binarize(const Matrix& latent);

// scores = X · Wᵀ. X holds the quantized integer inputs as doubles.
// The hard-limiting quantizer sign(score) is a reporting view; class
// decisions come from the argmax.
Matrix forward(const Matrix& x_quantized, const Matrix& binary_weights);

struct HingeResult {
    double loss = 0.0;
    Matrix grad;  // d loss / d scores
};

// loss = mean over (b, k) of max(0, 1 − t·s)²
HingeResult squared_hinge_grad(const Matrix& scores, const Matrix& targets);

// Straight-through step: grad (w.r.t. the binary weights) passes through to
// the latent weights, zeroed where |latent| > 1; then the bias-corrected ADAM
// update; then clamp to [−1, 1].
void adam_step(Matrix& latent, const Matrix& grad, AdamState& state);

// Ex-situ training pipeline: fit normalization on X, quantize, one-hot encode,
// then shuffled mini-batch epochs of forward / squared hinge / ADAM / re-binarize.
TrainedModel train(const Matrix& x, std::span<const int> labels, int classes,
                   const TrainerConfig& cfg, std::uint64_t seed);

// Quantized model inputs for raw features (appends the bias column when enabled).
Matrix model_inputs(const TrainedModel& model, const Matrix& x);

// argmax with ties broken toward the lower class index. Scores within
// 1e-9 × max|score| count as tied: exact float equality cannot survive the
// analog pipeline's summation orders, while genuine score gaps sit many
// orders of magnitude above this.
int decide(std::span<const double> scores);

double evaluate(const TrainedModel& model, const Matrix& x, std::span<const int> labels);

}  // namespace xbarvmm
