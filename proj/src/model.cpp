#include "tarsim/model.hpp"

#include <algorithm>

#include <json.hpp>

#include "tarsim/error.hpp"

namespace tarsim {
namespace {

double dot(const Eigen::VectorXd& w, const SparseVec& v) {
    double acc = 0.0;
    for (std::size_t k = 0; k < v.nnz(); ++k) acc += w[v.idx[k]] * v.val[k];
    return acc;
}

// log(1 + exp(m)) - y * m, computed without overflow.
double example_loss(double margin, int label) {
    return std::max(margin, 0.0) - label * margin + std::log1p(std::exp(-std::fabs(margin)));
}

Eigen::VectorXd margins_of(const LinearModel& model,
                           std::span<const SparseVec* const> examples) {
    Eigen::VectorXd m(static_cast<Eigen::Index>(examples.size()));
    for (std::size_t i = 0; i < examples.size(); ++i)
        m[static_cast<Eigen::Index>(i)] = model.bias + dot(model.weights, *examples[i]);
    return m;
}

double loss_from_margins(const Eigen::VectorXd& margins, std::span<const int> labels,
                         double weights_sq_norm, double l2_penalty) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < margins.size(); ++i)
        sum += example_loss(margins[i], labels[static_cast<std::size_t>(i)]);
    return sum / static_cast<double>(margins.size()) + 0.5 * l2_penalty * weights_sq_norm;
}

void check_config(const TrainConfig& config) {
    const bool ok = config.l2_penalty >= 0.0 && config.max_epochs >= 1 &&
                    config.loss_tol >= 0.0 && config.grad_tol >= 0.0 &&
                    config.armijo_c > 0.0 && config.armijo_c < 1.0 &&
                    config.backtrack > 0.0 && config.backtrack < 1.0 &&
                    config.initial_step > 0.0;
    if (!ok)
        throw Error(ErrorCode::InfeasibleParameters, "train config out of range");
}

void check_examples(std::span<const SparseVec* const> examples,
                    std::span<const int> labels, Eigen::Index dim) {
    if (examples.empty())
        throw Error(ErrorCode::EmptyTrainingSet, "empty training set");
    if (examples.size() != labels.size())
        throw Error(ErrorCode::DimensionMismatch, "example/label count mismatch");
    bool has_pos = false, has_neg = false;
    for (int y : labels) (y != 0 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg)
        throw Error(ErrorCode::SingleClassTraining,
                    "training set contains a single class");
    for (const SparseVec* v : examples)
        if (!v->empty() && v->idx.back() >= dim)
            throw Error(ErrorCode::DimensionMismatch,
                        "feature index exceeds model dimension");
}

} // namespace

double logistic_loss(const LinearModel& model,
                     std::span<const SparseVec* const> examples,
                     std::span<const int> labels, double l2_penalty) {
    const Eigen::VectorXd margins = margins_of(model, examples);
    return loss_from_margins(margins, labels, model.weights.squaredNorm(), l2_penalty);
}

std::pair<Eigen::VectorXd, double> logistic_gradient(
    const LinearModel& model, std::span<const SparseVec* const> examples,
    std::span<const int> labels, double l2_penalty) {
    const double inv_n = 1.0 / static_cast<double>(examples.size());
    Eigen::VectorXd grad_w = l2_penalty * model.weights;
    double grad_b = 0.0;
    // Residuals accumulated in ascending example order for determinism.
    for (std::size_t i = 0; i < examples.size(); ++i) {
        const double margin = model.bias + dot(model.weights, *examples[i]);
        const double residual = (sigmoid(margin) - labels[i]) * inv_n;
        grad_b += residual;
        const SparseVec& v = *examples[i];
        for (std::size_t k = 0; k < v.nnz(); ++k) grad_w[v.idx[k]] += residual * v.val[k];
    }
    return {std::move(grad_w), grad_b};
}

TrainResult train(std::span<const SparseVec* const> examples,
                  std::span<const int> labels, Eigen::Index dim,
                  const TrainConfig& config, const LinearModel* init) {
    check_examples(examples, labels, dim);

    TrainResult result;
    LinearModel& model = result.model;
    if (init != nullptr) {
        if (init->weights.size() != dim)
            throw Error(ErrorCode::DimensionMismatch, "warm-start dimension mismatch");
        model = *init;
    } else {
        model.weights = Eigen::VectorXd::Zero(dim);
        model.bias = 0.0;
    }

    const std::size_t n = examples.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    Eigen::VectorXd margins = margins_of(model, examples);
    double loss = loss_from_margins(margins, labels, model.weights.squaredNorm(),
                                    config.l2_penalty);
    result.loss_history.push_back(loss);

    Eigen::VectorXd grad_w(dim);
    Eigen::VectorXd grad_margin(static_cast<Eigen::Index>(n));
    Eigen::VectorXd cand_margins(static_cast<Eigen::Index>(n));
    double step = config.initial_step;

    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        grad_w = config.l2_penalty * model.weights;
        double grad_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double residual =
                (sigmoid(margins[static_cast<Eigen::Index>(i)]) - labels[i]) * inv_n;
            grad_b += residual;
            const SparseVec& v = *examples[i];
            for (std::size_t k = 0; k < v.nnz(); ++k)
                grad_w[v.idx[k]] += residual * v.val[k];
        }

        const double grad_sq = grad_w.squaredNorm() + grad_b * grad_b;
        result.grad_norm = std::sqrt(grad_sq);
        if (result.grad_norm <= config.grad_tol) {
            result.converged = true;
            break;
        }

        // Change of each margin per unit step along -grad: one sparse pass,
        // so the backtracking loop below is dense-only.
        for (std::size_t i = 0; i < n; ++i)
            grad_margin[static_cast<Eigen::Index>(i)] = dot(grad_w, *examples[i]) + grad_b;

        const double w_dot_g = model.weights.dot(grad_w);
        const double w_sq = model.weights.squaredNorm();
        const double g_sq = grad_w.squaredNorm();

        step = std::min(step * 2.0, 1e6);
        double cand_loss = loss;
        bool accepted = false;
        for (int halvings = 0; halvings < 60; ++halvings) {
            cand_margins = margins - step * grad_margin;
            const double cand_w_sq = w_sq - 2.0 * step * w_dot_g + step * step * g_sq;
            cand_loss = loss_from_margins(cand_margins, labels, cand_w_sq,
                                          config.l2_penalty);
            if (cand_loss <= loss - config.armijo_c * step * grad_sq) {
                accepted = true;
                break;
            }
            step *= config.backtrack;
        }
        if (!accepted) break; // at the numerical floor; no descent step found

        model.weights -= step * grad_w;
        model.bias -= step * grad_b;
        margins.swap(cand_margins);
        const double previous = loss;
        loss = cand_loss;
        result.loss_history.push_back(loss);
        ++result.epochs;

        if (previous - loss <= config.loss_tol * std::max(1.0, std::fabs(previous))) {
            result.converged = true;
            break;
        }
    }

    // Report the gradient norm at the final weights.
    auto [gw, gb] = logistic_gradient(model, examples, labels, config.l2_penalty);
    result.grad_norm = std::sqrt(gw.squaredNorm() + gb * gb);
    if (result.grad_norm <= config.grad_tol) result.converged = true;
    return result;
}

double score(const LinearModel& model, const SparseVec& v) {
    if (!v.empty() && v.idx.back() >= model.weights.size())
        throw Error(ErrorCode::DimensionMismatch,
                    "vector index " + std::to_string(v.idx.back()) +
                        " out of range for model of dimension " +
                        std::to_string(model.weights.size()));
    return sigmoid(model.bias + dot(model.weights, v));
}

std::string model_to_json(const LinearModel& model) {
    nlohmann::json j;
    j["bias"] = model.bias;
    j["weights"] = std::vector<double>(model.weights.begin(), model.weights.end());
    return j.dump();
}

LinearModel model_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    LinearModel model;
    const auto weights = j.at("weights").get<std::vector<double>>();
    model.weights = Eigen::Map<const Eigen::VectorXd>(
        weights.data(), static_cast<Eigen::Index>(weights.size()));
    model.bias = j.at("bias").get<double>();
    return model;
}

} // namespace tarsim
