// Adam with lazy sparse rows: first/second moments are shaped like the
// parameters, but only the rows present in a step's gradient advance.
// Stale rows keep their moments until the next time they are touched.
#pragma once

#include "ekge/gradients.hpp"

namespace ekge {

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    AdamConfig config;
    std::int64_t step = 0;
    std::map<Slot, Table> m, v;

    explicit AdamState(const ModelParams& P, AdamConfig cfg = {}) : config(cfg) {
        for (const auto& [slot, t] : P.tables) {
            m.emplace(slot, Table(t.rows, t.cols, t.fan_in, t.fan_out));
            v.emplace(slot, Table(t.rows, t.cols, t.fan_in, t.fan_out));
        }
    }

    // Moment tables for slots added after construction (stage-two tables).
    void ensure_slot(const ModelParams& P, Slot slot) {
        if (m.count(slot)) return;
        const Table& t = P.table(slot);
        m.emplace(slot, Table(t.rows, t.cols, t.fan_in, t.fan_out));
        v.emplace(slot, Table(t.rows, t.cols, t.fan_in, t.fan_out));
    }
};

// One Adam update. The step counter advances even for an empty gradient;
// parameters only move where the gradient has rows.
inline void adam_step(AdamState& state, ModelParams& params, const SparseGrad& grad, double lr) {
    state.step += 1;
    const double b1 = state.config.beta1, b2 = state.config.beta2, eps = state.config.epsilon;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    for (const auto& [key, g] : grad.rows) {
        const auto [slot, row] = key;
        Table& pt = params.table(slot);
        if (row < 0 || row >= pt.rows || static_cast<std::int64_t>(g.size()) != pt.cols) {
            throw std::invalid_argument("adam_step: gradient shape does not match parameters");
        }
        auto mrow = state.m.at(slot).row(row);
        auto vrow = state.v.at(slot).row(row);
        auto prow = pt.row(row);
        for (std::size_t i = 0; i < g.size(); ++i) {
            mrow[i] = b1 * mrow[i] + (1.0 - b1) * g[i];
            vrow[i] = b2 * vrow[i] + (1.0 - b2) * g[i] * g[i];
            const double mhat = mrow[i] / bc1;
            const double vhat = vrow[i] / bc2;
            prow[i] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
    }
}

}  // namespace ekge
