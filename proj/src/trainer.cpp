#include "xbarvmm/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xbarvmm/errors.hpp"

namespace xbarvmm {

void TrainerConfig::validate(int samples) const {
    if (epochs < 1) throw ParamError("epochs must be >= 1");
    if (batch < 1 || batch > samples)
        throw ParamError("batch size must be in [1, samples]");
    if (!(learning_rate > 0.0)) throw ParamError("learning_rate must be > 0");
    if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0)
        throw ParamError("beta1/beta2 must be in [0, 1)");
    if (!(epsilon > 0.0)) throw ParamError("epsilon must be > 0");
    if (init_range < 0.0) throw ParamError("init_range must be >= 0");
}

Matrix one_hot_encode(std::span<const int> labels, int classes) {
    if (classes < 1) throw ParamError("one_hot_encode: classes must be >= 1");
    Matrix t(static_cast<int>(labels.size()), classes, -1.0);
    for (std::size_t s = 0; s < labels.size(); ++s) {
        if (labels[s] < 0 || labels[s] >= classes)
            throw ParamError("one_hot_encode: label out of range");
        t(static_cast<int>(s), labels[s]) = 1.0;
    }
    return t;
}

Matrix binarize(const Matrix& latent) {
    Matrix b(latent.rows, latent.cols);
    for (std::size_t i = 0; i < latent.data.size(); ++i)
        b.data[i] = latent.data[i] < 0.0 ? -1.0 : 1.0;  // sign(0) = +1
    return b;
}

Matrix forward(const Matrix& x_quantized, const Matrix& binary_weights) {
    if (x_quantized.cols != binary_weights.cols)
        throw ParamError("forward: feature dimension mismatch");
    Matrix scores(x_quantized.rows, binary_weights.rows);
    for (int b = 0; b < x_quantized.rows; ++b)
        for (int k = 0; k < binary_weights.rows; ++k) {
            double s = 0.0;
            for (int f = 0; f < x_quantized.cols; ++f)
                s += x_quantized(b, f) * binary_weights(k, f);
            scores(b, k) = s;
        }
    return scores;
}

HingeResult squared_hinge_grad(const Matrix& scores, const Matrix& targets) {
    if (!scores.same_shape(targets)) throw ParamError("squared_hinge_grad: shape mismatch");
    HingeResult res;
    res.grad = Matrix(scores.rows, scores.cols);
    const double norm = 1.0 / (static_cast<double>(scores.rows) * scores.cols);
    double loss = 0.0;
    for (std::size_t i = 0; i < scores.data.size(); ++i) {
        const double margin = std::max(0.0, 1.0 - targets.data[i] * scores.data[i]);
        loss += margin * margin;
        res.grad.data[i] = -2.0 * targets.data[i] * margin * norm;
    }
    res.loss = loss * norm;
    return res;
}

void adam_step(Matrix& latent, const Matrix& grad, AdamState& state) {
    if (!latent.same_shape(grad) || !latent.same_shape(state.first_moment))
        throw ParamError("adam_step: shape mismatch");
    state.step += 1;
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < latent.data.size(); ++i) {
        // straight-through: saturated latents stop accumulating gradient
        const double g = std::abs(latent.data[i]) > 1.0 ? 0.0 : grad.data[i];
        double& m = state.first_moment.data[i];
        double& v = state.second_moment.data[i];
        m = state.beta1 * m + (1.0 - state.beta1) * g;
        v = state.beta2 * v + (1.0 - state.beta2) * g * g;
        const double update = state.learning_rate * (m / c1) / (std::sqrt(v / c2) + state.epsilon);
        latent.data[i] = std::clamp(latent.data[i] - update, -1.0, 1.0);
    }
}

Matrix model_inputs(const TrainedModel& model, const Matrix& x) {
    Matrix q = quantize_all(x, model.stats);
    if (!model.bias) return q;
    Matrix out(q.rows, q.cols + 1);
    for (int s = 0; s < q.rows; ++s) {
        for (int f = 0; f < q.cols; ++f) out(s, f) = q(s, f);
        out(s, q.cols) = 255.0;  // always-on bias input
    }
    return out;
}

TrainedModel train(const Matrix& x, std::span<const int> labels, int classes,
                   const TrainerConfig& cfg, std::uint64_t seed) {
    if (x.rows != static_cast<int>(labels.size()))
        throw ParamError("train: feature/label count mismatch");
    cfg.validate(x.rows);

    TrainedModel model;
    model.stats = fit_normalization(x);
    model.classes = classes;
    model.bias = cfg.bias;
    model.hyper = cfg;
    model.seed = seed;

    const Matrix xq = model_inputs(model, x);
    const Matrix targets = one_hot_encode(labels, classes);
    const int f_in = xq.cols;

    Rng init_rng = Rng::substream(seed, "weight-init");
    model.latent_weights = Matrix(classes, f_in);
    for (double& w : model.latent_weights.data)
        w = init_rng.uniform(-cfg.init_range, cfg.init_range);
    model.binary_weights = binarize(model.latent_weights);

    AdamState adam = AdamState::init(classes, f_in, cfg);
    std::vector<int> order(x.rows);
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng shuffle_rng = Rng::substream(seed, "batch-shuffle", static_cast<std::uint64_t>(epoch));
        shuffle_rng.shuffle(order);
        for (int start = 0; start < x.rows; start += cfg.batch) {
            const int bsz = std::min(cfg.batch, x.rows - start);
            Matrix xb(bsz, f_in);
            Matrix tb(bsz, classes);
            for (int i = 0; i < bsz; ++i) {
                const int s = order[start + i];
                for (int f = 0; f < f_in; ++f) xb(i, f) = xq(s, f);
                for (int k = 0; k < classes; ++k) tb(i, k) = targets(s, k);
            }
            const Matrix scores = forward(xb, model.binary_weights);
            const HingeResult hinge = squared_hinge_grad(scores, tb);
            // chain rule through scores = X·Wᵀ; the binarization itself passes
            // the gradient straight through
            Matrix grad_w(classes, f_in);
            for (int k = 0; k < classes; ++k)
                for (int f = 0; f < f_in; ++f) {
                    double g = 0.0;
                    for (int i = 0; i < bsz; ++i) g += hinge.grad(i, k) * xb(i, f);
                    grad_w(k, f) = g;
                }
            adam_step(model.latent_weights, grad_w, adam);
            model.binary_weights = binarize(model.latent_weights);
        }
    }
    return model;
}

int decide(std::span<const double> scores) {
    if (scores.empty()) throw ParamError("decide: no scores");
    double scale = 0.0;
    for (double s : scores) scale = std::max(scale, std::abs(s));
    const double tol = 1e-9 * scale;
    int winner = 0;
    for (std::size_t k = 1; k < scores.size(); ++k)
        if (scores[k] > scores[winner] + tol) winner = static_cast<int>(k);
    return winner;
}

double evaluate(const TrainedModel& model, const Matrix& x, std::span<const int> labels) {
    if (x.rows != static_cast<int>(labels.size()))
        throw ParamError("evaluate: feature/label count mismatch");
    if (x.rows == 0) return 0.0;
    const Matrix xq = model_inputs(model, x);
    const Matrix scores = forward(xq, model.binary_weights);
    int correct = 0;
    for (int s = 0; s < scores.rows; ++s)
        if (decide(scores.row(s)) == labels[s]) ++correct;
    return static_cast<double>(correct) / x.rows;
}

}  // namespace xbarvmm
