// Marginalizing the time representation turns a trained episodic model
// into a semantic scorer. Every admissible model factors as
// theta = a_t . f(s,p,o), linear in the time representation, so summing
// time rows before scoring equals summing per-timestamp scores. The
// start-end mode subtracts the summed end-time representation, removing
// the contribution of terminated events.
#pragma once

#include <array>

#include "ekge/evaluation.hpp"
#include "ekge/training.hpp"

namespace ekge {

enum class ProjectionMode { start, start_end };

inline const char* projection_mode_name(ProjectionMode m) {
    return m == ProjectionMode::start ? "start" : "start-end";
}

struct ProjectedScorer {
    ModelKind kind{};
    Rank rank;
    const ModelParams* params = nullptr;  // frozen entity/predicate tables
    std::vector<double> marginal;         // time vector (compositional kinds) or core (tucker/cont)
    std::vector<double> marginal_im;      // imaginary part, complex embeddings only
};

namespace detail {

inline std::vector<double> sum_rows(const Table& t) {
    std::vector<double> acc(t.cols, 0.0);
    for (std::int64_t r = 0; r < t.rows; ++r) {
        auto row = t.row(r);
        for (std::int64_t c = 0; c < t.cols; ++c) acc[c] += row[c];
    }
    return acc;
}

// Row-paired differences so identical tables cancel exactly.
inline std::vector<double> sum_row_differences(const Table& start, const Table& end) {
    std::vector<double> acc(start.cols, 0.0);
    for (std::int64_t r = 0; r < start.rows; ++r) {
        auto srow = start.row(r);
        auto erow = end.row(r);
        for (std::int64_t c = 0; c < start.cols; ++c) acc[c] += srow[c] - erow[c];
    }
    return acc;
}

}  // namespace detail

inline ProjectedScorer marginalize(const ModelParams& P, ProjectionMode mode) {
    if (P.variant != Variant::episodic || !kind_admits_projection(P.kind)) {
        throw std::invalid_argument("marginalize: " + model_name(P.kind, P.variant) +
                                    " does not factor through a time representation");
    }
    const bool complex_kind = P.kind == ModelKind::complex;
    const Slot start_slot = P.kind == ModelKind::cont ? Slot::time_core : Slot::time_re;
    const Slot end_slot = P.kind == ModelKind::cont ? Slot::time_core_end : Slot::time_end_re;

    ProjectedScorer scorer;
    scorer.kind = P.kind;
    scorer.rank = P.rank;
    scorer.params = &P;
    if (mode == ProjectionMode::start_end) {
        if (!P.has(end_slot) || (complex_kind && !P.has(Slot::time_end_im))) {
            throw std::invalid_argument("marginalize: start-end mode needs trained end-time tables");
        }
        scorer.marginal = detail::sum_row_differences(P.table(start_slot), P.table(end_slot));
        if (complex_kind) {
            scorer.marginal_im = detail::sum_row_differences(P.table(Slot::time_im), P.table(Slot::time_end_im));
        }
    } else {
        scorer.marginal = detail::sum_rows(P.table(start_slot));
        if (complex_kind) scorer.marginal_im = detail::sum_rows(P.table(Slot::time_im));
    }
    return scorer;
}

inline double project_score(const ProjectedScorer& scorer, const Triple& tr) {
    const ModelParams& P = *scorer.params;
    const auto& E = P.table(Slot::entity_re);
    switch (scorer.kind) {
        case ModelKind::dist_mult: {
            const auto lam = P.table(Slot::lambda).row(0);
            const auto s = E.row(tr.s), o = E.row(tr.o);
            const auto p = P.table(Slot::predicate_re).row(tr.p);
            double acc = 0.0;
            for (std::size_t i = 0; i < lam.size(); ++i) acc += scorer.marginal[i] * lam[i] * s[i] * p[i] * o[i];
            return acc;
        }
        case ModelKind::hole: {
            auto so = circular_correlation(detail::to_vec(E.row(tr.s)), detail::to_vec(E.row(tr.o)));
            auto pso = circular_correlation(detail::to_vec(P.table(Slot::predicate_re).row(tr.p)), so);
            double acc = 0.0;
            for (std::size_t i = 0; i < pso.size(); ++i) acc += scorer.marginal[i] * pso[i];
            return acc;
        }
        case ModelKind::complex: {
            const auto& Ei = P.table(Slot::entity_im);
            const auto sr = E.row(tr.s), si = Ei.row(tr.s), or_ = E.row(tr.o), oi = Ei.row(tr.o);
            const auto pr = P.table(Slot::predicate_re).row(tr.p), pi = P.table(Slot::predicate_im).row(tr.p);
            double acc = 0.0;
            for (std::size_t i = 0; i < sr.size(); ++i) {
                const std::complex<double> z = std::complex<double>(sr[i], si[i]) *
                                               std::complex<double>(pr[i], pi[i]) *
                                               std::complex<double>(or_[i], -oi[i]);
                acc += scorer.marginal[i] * z.real() - scorer.marginal_im[i] * z.imag();
            }
            return acc;
        }
        case ModelKind::tucker: {
            // marginal is the raw time vector; contract it with the shared core
            const auto core = P.table(Slot::core).row(0);
            const auto s = E.row(tr.s), o = E.row(tr.o);
            const auto p = P.table(Slot::predicate_re).row(tr.p);
            const std::size_t r = s.size();
            double acc = 0.0;
            for (std::size_t r1 = 0; r1 < scorer.marginal.size(); ++r1) {
                acc += scorer.marginal[r1] * detail::trilinear(s, p, o, core.subspan(r1 * r * r * r, r * r * r));
            }
            return acc;
        }
        case ModelKind::cont:
            return detail::trilinear(E.row(tr.s), P.table(Slot::predicate_re).row(tr.p), E.row(tr.o),
                                     scorer.marginal);
        default: break;
    }
    throw std::invalid_argument("project_score: unsupported kind");
}

struct ProjectionSetMetrics {
    double hits10_filtered = 0.0;
    double hits10_raw = 0.0;
    std::size_t count = 0;
};

struct ProjectionEvaluation {
    ProjectionSetMetrics genuine;
    ProjectionSetMetrics false_set;
    double auprc = 0.0;
    double recall = 0.0;
};

namespace detail {

inline ProjectionSetMetrics projection_hits10(const ProjectedScorer& scorer, const SemanticDataset& ds,
                                              const FilterIndex& filter, unsigned threads) {
    const Index ne = scorer.params->num_entities;
    filter.prepare();
    std::vector<std::array<int, 2>> ranks(ds.triples.size());
    parallel_for(ds.triples.size(), threads, [&](std::size_t i) {
        const Triple& tr = ds.triples[i];
        const Quadruple pinned{0, tr.s, tr.p, tr.o, true};
        auto candidate_score = [&](Index c) { return project_score(scorer, Triple{tr.s, tr.p, c, true}); };
        ranks[i][0] = midrank(tr.o, ne, candidate_score, [&](Index c) {
            return filter.is_true(pinned, FactSlot::object, c);
        });
        ranks[i][1] = midrank(tr.o, ne, candidate_score, [](Index) { return false; });
    });
    ProjectionSetMetrics out;
    out.count = ds.triples.size();
    for (const auto& r : ranks) {
        out.hits10_filtered += r[0] <= 10;
        out.hits10_raw += r[1] <= 10;
    }
    if (out.count > 0) {
        out.hits10_filtered /= static_cast<double>(out.count);
        out.hits10_raw /= static_cast<double>(out.count);
    }
    return out;
}

}  // namespace detail

// Object-corruption Hits@10 on the genuine and false semantic sets, plus
// AUPRC/recall over the pooled triples with set membership as the target
// and the projected score as the prediction.
inline ProjectionEvaluation evaluate_projection(const ProjectedScorer& scorer, const SemanticDataset& genuine,
                                                const SemanticDataset& false_set, const FilterIndex& filter,
                                                unsigned threads = 1, double recall_threshold = 0.5) {
    if (genuine.triples.empty() || false_set.triples.empty()) {
        throw DataError("evaluate_projection: both semantic sets must be non-empty");
    }
    ProjectionEvaluation out;
    out.genuine = detail::projection_hits10(scorer, genuine, filter, threads);
    out.false_set = detail::projection_hits10(scorer, false_set, filter, threads);

    std::vector<double> scores;
    std::vector<bool> labels;
    scores.reserve(genuine.size() + false_set.size());
    for (const auto& tr : genuine.triples) {
        scores.push_back(project_score(scorer, tr));
        labels.push_back(true);
    }
    for (const auto& tr : false_set.triples) {
        scores.push_back(project_score(scorer, tr));
        labels.push_back(false);
    }
    out.auprc = auprc(scores, labels);
    out.recall = recall_at(scores, labels, recall_threshold);
    return out;
}

}  // namespace ekge
