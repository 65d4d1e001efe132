// Training objectives: regularized logistic loss over labeled scores and
// the pairwise margin ranking loss (with optional sigmoid squashing).
#pragma once

#include <cmath>
#include <span>

#include "ekge/params.hpp"

namespace ekge {

inline double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow for large |x|.
inline double softplus(double x) {
    if (x > 0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

inline double squared_param_norm(const ModelParams& P) {
    double acc = 0.0;
    for (const auto& [slot, t] : P.tables) {
        for (double v : t.values) acc += v * v;
    }
    return acc;
}

// sum_i log(1 + exp(-y_i * theta_i)) + l2_weight * ||params||^2.
// Labels are +/-1. Pass params = nullptr (or l2_weight = 0) to skip the
// penalty term.
inline double logistic_loss(std::span<const double> scores, std::span<const int> labels,
                            const ModelParams* params = nullptr, double l2_weight = 0.0) {
    if (scores.size() != labels.size()) throw std::invalid_argument("logistic_loss: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1 && labels[i] != -1) throw std::invalid_argument("logistic_loss: labels must be +/-1");
        acc += softplus(-static_cast<double>(labels[i]) * scores[i]);
    }
    if (params != nullptr && l2_weight != 0.0) acc += l2_weight * squared_param_norm(*params);
    return acc;
}

// d(logistic term)/d(theta_i) = -y_i * sigmoid(-y_i * theta_i).
inline double logistic_loss_dtheta(double score, int label) {
    const double y = static_cast<double>(label);
    return -y * sigmoid(-y * score);
}

// sum over all (positive, negative) pairs of
// max(0, margin + f(neg) - f(pos)) where f is sigmoid or identity.
inline double margin_loss(std::span<const double> positive, std::span<const double> negative, double margin,
                          bool apply_sigmoid) {
    if (margin < 0) throw std::invalid_argument("margin_loss: margin must be >= 0");
    double acc = 0.0;
    for (double pos : positive) {
        const double fp = apply_sigmoid ? sigmoid(pos) : pos;
        for (double neg : negative) {
            const double fn = apply_sigmoid ? sigmoid(neg) : neg;
            acc += std::max(0.0, margin + fn - fp);
        }
    }
    return acc;
}

// Partials of one hinge term w.r.t. the positive and negative score.
// Returns {d/d(pos), d/d(neg)}; both are zero when the hinge is inactive.
inline std::pair<double, double> margin_pair_dtheta(double pos, double neg, double margin, bool apply_sigmoid) {
    const double fp = apply_sigmoid ? sigmoid(pos) : pos;
    const double fn = apply_sigmoid ? sigmoid(neg) : neg;
    if (margin + fn - fp <= 0.0) return {0.0, 0.0};
    if (!apply_sigmoid) return {-1.0, 1.0};
    return {-fp * (1.0 - fp), fn * (1.0 - fn)};
}

}  // namespace ekge
