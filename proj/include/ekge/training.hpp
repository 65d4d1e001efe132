// Mini-batch training with Adam, seeded shuffling and negative sampling,
// periodic filtered-MRR validation with best-checkpoint early stopping,
// and the two-stage start/end fitting used for time marginalization.
//
// Weight decay: the quadratic penalty is applied as decoupled decay on the
// rows touched by each step; rows an epoch never touches receive one
// compounded catch-up decay at epoch end, so every row sees the same total
// shrinkage per epoch.
#pragma once

#include <optional>
#include <set>

#include "ekge/adam.hpp"
#include "ekge/evaluation.hpp"
#include "ekge/sampling.hpp"

namespace ekge {

enum class LossKind { logistic, margin };

struct NegativeSpec {
    std::vector<FactSlot> slots = {FactSlot::subject, FactSlot::object};
    int per_slot = 1;
};

struct TrainConfig {
    LossKind loss = LossKind::logistic;
    double margin = 1.0;
    bool apply_sigmoid = true;  // margin loss only; the raw-logit regime turns this off
    double l2_weight = 0.0;
    double learning_rate = 1e-3;
    int batch_size = 512;
    int max_epochs = 500;
    int eval_every = 50;
    int patience = 2;  // evaluations without MRR improvement before stopping
    NegativeSpec negatives;
    std::vector<EvalSlot> eval_slots = {EvalSlot::entity};
    AdamConfig adam;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct EvalPoint {
    int epoch = 0;
    double train_loss = 0.0;
    double valid_mrr = 0.0;
};

struct TrainReport {
    std::vector<EvalPoint> history;
    int stopped_epoch = 0;
    int best_epoch = 0;
    double best_mrr = 0.0;
};

struct TrainResult {
    ModelParams params;
    TrainReport report;
};

namespace detail {

struct FitOptions {
    TimeSide side = TimeSide::start;
    // nullptr trains everything; otherwise only these slots move.
    const std::set<Slot>* trainable = nullptr;
};

inline bool slot_is_trainable(const FitOptions& opt, Slot s) {
    return opt.trainable == nullptr || opt.trainable->count(s) != 0;
}

// Optimizes params in place over the positive quadruples of `train`,
// validating on `valid`. Returns the report; params end at the best
// evaluated checkpoint (or the final state if no evaluation ever ran).
inline TrainReport fit(ModelParams& params, const EpisodicDataset& train_ds, const EpisodicDataset& valid_ds,
                       const TrainConfig& cfg, const FitOptions& opt = {}) {
    if (cfg.learning_rate <= 0 || cfg.l2_weight < 0 || cfg.margin < 0) {
        throw std::invalid_argument("train: need lr > 0, l2 >= 0, margin >= 0");
    }
    if (cfg.batch_size < 1 || cfg.eval_every < 1 || cfg.patience < 1 || cfg.max_epochs < 0) {
        throw std::invalid_argument("train: bad schedule parameters");
    }
    if (!train_ds.vocab || !valid_ds.vocab || train_ds.vocab->hash() != valid_ds.vocab->hash()) {
        throw DataError("train: train and valid datasets must share a vocabulary");
    }
    if (params.variant == Variant::semantic) {
        for (FactSlot s : cfg.negatives.slots) {
            if (s == FactSlot::timestamp) {
                throw std::invalid_argument("train: timestamp corruption is undefined for semantic models");
            }
        }
    }

    const Vocabulary& vocab = *train_ds.vocab;
    FilterIndex filter;
    filter.add(train_ds);
    filter.add(valid_ds);

    std::vector<Quadruple> positives;
    for (const auto& q : train_ds.quadruples) {
        if (q.value) positives.push_back(q);
    }

    TrainReport report;
    if (cfg.max_epochs == 0 || positives.empty()) return report;

    AdamState adam(params);
    Rng shuffle_rng = seeded_rng(cfg.seed, 0x5481);
    Rng negative_rng = seeded_rng(cfg.seed, 0x0e6);

    std::optional<ModelParams> best;
    int evals_without_improvement = 0;
    const double decay_factor = 1.0 - 2.0 * cfg.learning_rate * cfg.l2_weight;

    std::vector<std::size_t> order(positives.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    // per-epoch touch tracking for the catch-up decay
    std::map<Slot, std::vector<char>> touched_this_epoch;
    if (cfg.l2_weight > 0) {
        for (const auto& [slot, t] : params.tables) {
            if (slot_is_trainable(opt, slot)) touched_this_epoch.emplace(slot, std::vector<char>(t.rows, 0));
        }
    }

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[uniform_index(shuffle_rng, i)]);
        }
        for (auto& [slot, marks] : touched_this_epoch) std::fill(marks.begin(), marks.end(), 0);

        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size, ++batches) {
            const std::size_t end = std::min(order.size(), begin + cfg.batch_size);

            // one group per positive: the fact plus its own negatives
            std::vector<Quadruple> facts;
            std::vector<std::size_t> group_start;
            for (std::size_t i = begin; i < end; ++i) {
                const Quadruple& pos = positives[order[i]];
                group_start.push_back(facts.size());
                facts.push_back(pos);
                auto negs = sample_negatives(pos, vocab, cfg.negatives.slots, cfg.negatives.per_slot, filter,
                                             negative_rng);
                facts.insert(facts.end(), negs.begin(), negs.end());
            }
            group_start.push_back(facts.size());

            std::vector<double> scores(facts.size());
            parallel_for(facts.size(), cfg.threads,
                         [&](std::size_t i) { scores[i] = score_fact(params, facts[i], opt.side); });

            // dL/dtheta per fact
            std::vector<double> dtheta(facts.size(), 0.0);
            double batch_loss = 0.0;
            for (std::size_t g = 0; g + 1 < group_start.size(); ++g) {
                const std::size_t lo = group_start[g], hi = group_start[g + 1];
                if (cfg.loss == LossKind::logistic) {
                    for (std::size_t i = lo; i < hi; ++i) {
                        const int label = facts[i].value ? 1 : -1;
                        batch_loss += softplus(-label * scores[i]);
                        dtheta[i] += logistic_loss_dtheta(scores[i], label);
                    }
                } else {
                    for (std::size_t j = lo + 1; j < hi; ++j) {
                        const double fp = cfg.apply_sigmoid ? sigmoid(scores[lo]) : scores[lo];
                        const double fn = cfg.apply_sigmoid ? sigmoid(scores[j]) : scores[j];
                        batch_loss += std::max(0.0, cfg.margin + fn - fp);
                        auto [dp, dn] = margin_pair_dtheta(scores[lo], scores[j], cfg.margin, cfg.apply_sigmoid);
                        dtheta[lo] += dp;
                        dtheta[j] += dn;
                    }
                }
            }
            if (!std::isfinite(batch_loss)) {
                throw NumericError("training diverged: non-finite loss at epoch " + std::to_string(epoch));
            }
            epoch_loss += batch_loss;

            // per-fact gradients may run in parallel; the merge is serialized
            // in fact order, so the result matches the single-threaded path
            SparseGrad grad;
            if (cfg.threads == 1 || facts.size() < 128) {
                for (std::size_t i = 0; i < facts.size(); ++i) {
                    if (dtheta[i] != 0.0) accumulate_fact_gradient(params, facts[i], dtheta[i], grad, opt.side);
                }
            } else {
                std::vector<SparseGrad> per_fact(facts.size());
                parallel_for(facts.size(), cfg.threads, [&](std::size_t i) {
                    if (dtheta[i] != 0.0) accumulate_fact_gradient(params, facts[i], dtheta[i], per_fact[i], opt.side);
                });
                for (const auto& pf : per_fact) {
                    for (const auto& [key, g] : pf.rows) grad.axpy(key.first, key.second, g, 1.0);
                }
            }
            if (opt.trainable != nullptr) {
                for (auto it = grad.rows.begin(); it != grad.rows.end();) {
                    if (!slot_is_trainable(opt, it->first.first)) it = grad.rows.erase(it);
                    else ++it;
                }
            }
            adam_step(adam, params, grad, cfg.learning_rate);

            if (cfg.l2_weight > 0) {
                for (const auto& [key, g] : grad.rows) {
                    const auto [slot, row] = key;
                    auto prow = params.table(slot).row(row);
                    for (double& v : prow) v *= decay_factor;
                    touched_this_epoch.at(slot)[row] = 1;
                }
            }
        }

        if (cfg.l2_weight > 0) {
            // catch-up decay so untouched rows shrink like touched ones
            const double catch_up = std::pow(decay_factor, static_cast<double>(batches));
            for (auto& [slot, marks] : touched_this_epoch) {
                Table& t = params.table(slot);
                for (std::int64_t r = 0; r < t.rows; ++r) {
                    if (!marks[r]) {
                        for (double& v : t.row(r)) v *= catch_up;
                    }
                }
            }
        }

        report.stopped_epoch = epoch;
        if (epoch % cfg.eval_every == 0) {
            Metrics metrics = evaluate(params, valid_ds, cfg.eval_slots, filter, RankingMode::filtered,
                                       cfg.threads, opt.side);
            const double mrr = mean_mrr(metrics);
            double reported_loss = epoch_loss;
            if (cfg.l2_weight > 0) reported_loss += cfg.l2_weight * squared_param_norm(params);
            report.history.push_back({epoch, reported_loss, mrr});
            if (mrr > report.best_mrr + 1e-12 || !best.has_value()) {
                report.best_mrr = mrr;
                report.best_epoch = epoch;
                best = params;
                evals_without_improvement = 0;
            } else if (++evals_without_improvement >= cfg.patience) {
                break;
            }
        }
    }

    if (best.has_value()) params = std::move(*best);
    return report;
}

}  // namespace detail

inline TrainResult train(ModelKind kind, Variant variant, const EpisodicDataset& train_ds,
                         const EpisodicDataset& valid_ds, Rank rank, const TrainConfig& cfg) {
    if (!train_ds.vocab) throw DataError("train: dataset has no vocabulary");
    TrainResult out{init_params(kind, variant, *train_ds.vocab, rank, cfg.seed), {}};
    out.report = detail::fit(out.params, train_ds, valid_ds, cfg);
    return out;
}

// Semantic models train on triples pinned at t = 0.
inline TrainResult train(ModelKind kind, const SemanticDataset& train_ds, const SemanticDataset& valid_ds,
                         Rank rank, const TrainConfig& cfg) {
    return train(kind, Variant::semantic, as_pinned_quadruples(train_ds), as_pinned_quadruples(valid_ds), rank,
                 cfg);
}

struct ProjectionTrainResult {
    ModelParams params;  // start-side tables plus trained end-time tables
    TrainReport start_stage;
    TrainReport end_stage;
};

inline bool kind_admits_projection(ModelKind kind) {
    switch (kind) {
        case ModelKind::dist_mult:
        case ModelKind::hole:
        case ModelKind::complex:
        case ModelKind::tucker:
        case ModelKind::cont: return true;
        default: return false;
    }
}

// Two-stage fitting: stage one trains everything on the start tensor;
// stage two freezes entity/predicate parameters (and, for the shared-core
// models, the core) and fits fresh end-time representations on the end
// tensor.
inline ProjectionTrainResult train_projection(ModelKind kind, const EpisodicDataset& start_ds,
                                              const EpisodicDataset& end_ds, Rank rank, const TrainConfig& cfg) {
    if (!kind_admits_projection(kind)) {
        throw std::invalid_argument("train_projection: " + kind_name(kind) +
                                    " does not factor through a time representation");
    }
    if (!start_ds.vocab || !end_ds.vocab || start_ds.vocab->hash() != end_ds.vocab->hash()) {
        throw DataError("train_projection: start and end tensors must share a vocabulary");
    }

    ProjectionTrainResult out{init_params(kind, Variant::episodic, *start_ds.vocab, rank, cfg.seed), {}, {}};
    out.start_stage = detail::fit(out.params, start_ds, start_ds, cfg);

    add_end_time_tables(out.params, cfg.seed + 1);
    std::set<Slot> end_slots;
    for (const auto& [slot, t] : out.params.tables) {
        if (is_end_time_slot(slot)) end_slots.insert(slot);
    }
    detail::FitOptions stage2;
    stage2.side = TimeSide::end;
    stage2.trainable = &end_slots;
    TrainConfig cfg2 = cfg;
    cfg2.seed = cfg.seed + 1;
    out.end_stage = detail::fit(out.params, end_ds, end_ds, cfg2, stage2);
    return out;
}

}  // namespace ekge
