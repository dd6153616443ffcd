#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tarsim/features.hpp"

namespace tarsim {

/// Binary logistic regression model over the vocabulary feature space.
struct LinearModel {
    Eigen::VectorXd weights;
    double bias = 0.0;
};

struct TrainConfig {
    double l2_penalty = 1e-4;  // on weights only, not the bias
    int max_epochs = 200;
    double loss_tol = 1e-6;    // relative decrease per epoch below which we stop
    double grad_tol = 1e-6;    // gradient norm below which we stop
    double armijo_c = 1e-4;    // sufficient-decrease constant
    double backtrack = 0.5;    // step shrink factor
    double initial_step = 1.0;
    std::uint64_t rng_seed = 0; // reserved for stochastic variants; the
                                // full-batch solver is order-free
};

struct TrainResult {
    LinearModel model;
    std::vector<double> loss_history; // loss after each accepted epoch, [0] = initial
    double grad_norm = 0.0;           // at the returned weights
    int epochs = 0;
    bool converged = false;
};

inline double sigmoid(double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

/// Mean L2-regularized negative log-likelihood of the examples.
double logistic_loss(const LinearModel& model,
                     std::span<const SparseVec* const> examples,
                     std::span<const int> labels, double l2_penalty);

/// Analytic gradient of logistic_loss; returns (d/dw, d/db).
std::pair<Eigen::VectorXd, double> logistic_gradient(
    const LinearModel& model, std::span<const SparseVec* const> examples,
    std::span<const int> labels, double l2_penalty);

/// Full-batch gradient descent with Armijo backtracking line search.
/// Deterministic; the loss history is strictly non-increasing. Pass `init`
/// to warm-start from a previous round's model.
TrainResult train(std::span<const SparseVec* const> examples,
                  std::span<const int> labels, Eigen::Index dim,
                  const TrainConfig& config, const LinearModel* init = nullptr);

/// sigmoid(bias + w . v). Throws DimensionMismatch if v indexes past the
/// weight vector.
double score(const LinearModel& model, const SparseVec& v);

/// Debug dump (weights array + bias); not a stability contract.
std::string model_to_json(const LinearModel& model);
LinearModel model_from_json(const std::string& text);

} // namespace tarsim
