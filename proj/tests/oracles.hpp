// Independent reference implementations used only by tests: naive
// loop-nest scorers written straight from each model's formula, a
// sort-based rank oracle, and a threshold-sweep area oracle. These must
// stay independent of the library's scoring/ranking code paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <ekge/ekge.hpp>

namespace oracle {

using ekge::Index;
using ekge::ModelParams;
using ekge::Quadruple;
using ekge::Slot;
using ekge::Triple;

inline double naive_distmult_epi(const ModelParams& P, const Quadruple& q) {
    const auto lam = P.table(Slot::lambda).row(0);
    const auto t = P.table(Slot::time_re).row(q.t);
    const auto s = P.table(Slot::entity_re).row(q.s);
    const auto p = P.table(Slot::predicate_re).row(q.p);
    const auto o = P.table(Slot::entity_re).row(q.o);
    double acc = 0;
    for (std::size_t i = 0; i < lam.size(); ++i) acc += lam[i] * t[i] * s[i] * p[i] * o[i];
    return acc;
}

inline double naive_distmult_sem(const ModelParams& P, const Triple& tr) {
    const auto lam = P.table(Slot::lambda).row(0);
    const auto s = P.table(Slot::entity_re).row(tr.s);
    const auto p = P.table(Slot::predicate_re).row(tr.p);
    const auto o = P.table(Slot::entity_re).row(tr.o);
    double acc = 0;
    for (std::size_t i = 0; i < lam.size(); ++i) acc += lam[i] * s[i] * p[i] * o[i];
    return acc;
}

// correlation by the mod-index formula, no shared code with the library
inline std::vector<double> naive_corr(std::span<const double> a, std::span<const double> b) {
    const std::size_t d = a.size();
    std::vector<double> out(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t i = 0; i < d; ++i) out[k] += a[i] * b[(k + i) % d];
    }
    return out;
}

inline double naive_hole_epi(const ModelParams& P, const Quadruple& q) {
    const auto t = P.table(Slot::time_re).row(q.t);
    const auto c = naive_corr(P.table(Slot::entity_re).row(q.s), P.table(Slot::entity_re).row(q.o));
    const auto pc = naive_corr(P.table(Slot::predicate_re).row(q.p), c);
    double acc = 0;
    for (std::size_t i = 0; i < pc.size(); ++i) acc += t[i] * pc[i];
    return acc;
}

inline double naive_hole_sem(const ModelParams& P, const Triple& tr) {
    const auto p = P.table(Slot::predicate_re).row(tr.p);
    const auto c = naive_corr(P.table(Slot::entity_re).row(tr.s), P.table(Slot::entity_re).row(tr.o));
    double acc = 0;
    for (std::size_t i = 0; i < c.size(); ++i) acc += p[i] * c[i];
    return acc;
}

// Re(t * s * p * conj(o)) expanded by hand per coordinate.
inline double naive_complex_epi(const ModelParams& P, const Quadruple& q) {
    const auto tr_ = P.table(Slot::time_re).row(q.t), ti = P.table(Slot::time_im).row(q.t);
    const auto sr = P.table(Slot::entity_re).row(q.s), si = P.table(Slot::entity_im).row(q.s);
    const auto pr = P.table(Slot::predicate_re).row(q.p), pi = P.table(Slot::predicate_im).row(q.p);
    const auto or_ = P.table(Slot::entity_re).row(q.o), oi = P.table(Slot::entity_im).row(q.o);
    double acc = 0;
    for (std::size_t i = 0; i < sr.size(); ++i) {
        // ts = t*s
        const double ts_r = tr_[i] * sr[i] - ti[i] * si[i];
        const double ts_i = tr_[i] * si[i] + ti[i] * sr[i];
        // tsp = ts*p
        const double tsp_r = ts_r * pr[i] - ts_i * pi[i];
        const double tsp_i = ts_r * pi[i] + ts_i * pr[i];
        // Re(tsp * conj(o))
        acc += tsp_r * or_[i] + tsp_i * oi[i];
    }
    return acc;
}

inline double naive_complex_sem(const ModelParams& P, const Triple& tr) {
    const auto sr = P.table(Slot::entity_re).row(tr.s), si = P.table(Slot::entity_im).row(tr.s);
    const auto pr = P.table(Slot::predicate_re).row(tr.p), pi = P.table(Slot::predicate_im).row(tr.p);
    const auto or_ = P.table(Slot::entity_re).row(tr.o), oi = P.table(Slot::entity_im).row(tr.o);
    double acc = 0;
    for (std::size_t i = 0; i < sr.size(); ++i) {
        const double sp_r = sr[i] * pr[i] - si[i] * pi[i];
        const double sp_i = sr[i] * pi[i] + si[i] * pr[i];
        acc += sp_r * or_[i] + sp_i * oi[i];
    }
    return acc;
}

inline double naive_tucker_epi(const ModelParams& P, const Quadruple& q) {
    const auto t = P.table(Slot::time_re).row(q.t);
    const auto s = P.table(Slot::entity_re).row(q.s);
    const auto p = P.table(Slot::predicate_re).row(q.p);
    const auto o = P.table(Slot::entity_re).row(q.o);
    const auto g = P.table(Slot::core).row(0);
    const std::size_t rt = t.size(), r = s.size();
    double acc = 0;
    for (std::size_t r1 = 0; r1 < rt; ++r1)
        for (std::size_t r2 = 0; r2 < r; ++r2)
            for (std::size_t r3 = 0; r3 < r; ++r3)
                for (std::size_t r4 = 0; r4 < r; ++r4)
                    acc += t[r1] * s[r2] * p[r3] * o[r4] * g[((r1 * r + r2) * r + r3) * r + r4];
    return acc;
}

inline double naive_tucker_sem(const ModelParams& P, const Triple& tr) {
    const auto s = P.table(Slot::entity_re).row(tr.s);
    const auto p = P.table(Slot::predicate_re).row(tr.p);
    const auto o = P.table(Slot::entity_re).row(tr.o);
    const auto g = P.table(Slot::core).row(0);
    const std::size_t r = s.size();
    double acc = 0;
    for (std::size_t r1 = 0; r1 < r; ++r1)
        for (std::size_t r2 = 0; r2 < r; ++r2)
            for (std::size_t r3 = 0; r3 < r; ++r3) acc += s[r1] * p[r2] * o[r3] * g[(r1 * r + r2) * r + r3];
    return acc;
}

inline double naive_rescal(const ModelParams& P, const Triple& tr) {
    const auto s = P.table(Slot::entity_re).row(tr.s);
    const auto o = P.table(Slot::entity_re).row(tr.o);
    const auto g = P.table(Slot::pred_matrix).row(tr.p);
    const std::size_t r = s.size();
    double acc = 0;
    for (std::size_t r1 = 0; r1 < r; ++r1)
        for (std::size_t r2 = 0; r2 < r; ++r2) acc += s[r1] * g[r1 * r + r2] * o[r2];
    return acc;
}

inline double naive_tree(const ModelParams& P, const Quadruple& q) {
    const auto t = P.table(Slot::time_re).row(q.t);
    const auto s = P.table(Slot::entity_re).row(q.s);
    const auto o = P.table(Slot::entity_re).row(q.o);
    const auto g1 = P.table(Slot::tree_g1).row(0);
    const auto g2 = P.table(Slot::tree_g2).row(0);
    const auto gp = P.table(Slot::pred_matrix).row(q.p);
    const std::size_t rt = t.size(), r = s.size();
    double acc = 0;
    for (std::size_t r1 = 0; r1 < rt; ++r1)
        for (std::size_t r2 = 0; r2 < r; ++r2)
            for (std::size_t r3 = 0; r3 < r; ++r3)
                for (std::size_t r4 = 0; r4 < r; ++r4)
                    for (std::size_t r5 = 0; r5 < r; ++r5)
                        for (std::size_t r6 = 0; r6 < rt; ++r6)
                            acc += t[r1] * s[r2] * g1[(r1 * r + r2) * r + r3] * gp[r3 * r + r4] *
                                   g2[(r4 * r + r5) * rt + r6] * o[r5] * t[r6];
    return acc;
}

inline double naive_cont(const ModelParams& P, const Quadruple& q) {
    const auto s = P.table(Slot::entity_re).row(q.s);
    const auto p = P.table(Slot::predicate_re).row(q.p);
    const auto o = P.table(Slot::entity_re).row(q.o);
    const auto g = P.table(Slot::time_core).row(q.t);
    const std::size_t r = s.size();
    double acc = 0;
    for (std::size_t r1 = 0; r1 < r; ++r1)
        for (std::size_t r2 = 0; r2 < r; ++r2)
            for (std::size_t r3 = 0; r3 < r; ++r3) acc += s[r1] * p[r2] * o[r3] * g[(r1 * r + r2) * r + r3];
    return acc;
}

inline double naive_score(const ModelParams& P, const Quadruple& q) {
    switch (P.kind) {
        case ekge::ModelKind::dist_mult: return naive_distmult_epi(P, q);
        case ekge::ModelKind::hole: return naive_hole_epi(P, q);
        case ekge::ModelKind::complex: return naive_complex_epi(P, q);
        case ekge::ModelKind::tucker: return naive_tucker_epi(P, q);
        case ekge::ModelKind::tree: return naive_tree(P, q);
        case ekge::ModelKind::cont: return naive_cont(P, q);
        default: throw std::logic_error("no naive episodic scorer");
    }
}

inline double naive_score(const ModelParams& P, const Triple& tr) {
    switch (P.kind) {
        case ekge::ModelKind::dist_mult: return naive_distmult_sem(P, tr);
        case ekge::ModelKind::hole: return naive_hole_sem(P, tr);
        case ekge::ModelKind::complex: return naive_complex_sem(P, tr);
        case ekge::ModelKind::tucker: return naive_tucker_sem(P, tr);
        case ekge::ModelKind::rescal: return naive_rescal(P, tr);
        default: throw std::logic_error("no naive semantic scorer");
    }
}

// Rank by explicit sort over (score, candidate) pairs; same mid-rank tie
// rule, counted from the sorted list instead of a linear scan.
inline int rank_by_sort(const std::vector<double>& candidate_scores, Index true_index,
                        const std::vector<bool>& removed) {
    const double true_score = candidate_scores[true_index];
    std::vector<std::pair<double, Index>> order;
    for (Index c = 0; c < static_cast<Index>(candidate_scores.size()); ++c) {
        if (c != true_index && removed[c]) continue;
        order.emplace_back(candidate_scores[c], c);
    }
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::int64_t greater = 0, equal = 0;
    for (const auto& [sc, c] : order) {
        if (c == true_index) continue;
        if (sc > true_score) ++greater;
        else if (sc == true_score) ++equal;
    }
    return static_cast<int>(1 + greater + (equal + 1) / 2);
}

// Area via an explicit sweep over every distinct threshold, recomputing
// precision/recall from scratch each time.
inline double auprc_by_sweep(const std::vector<double>& scores, const std::vector<bool>& labels) {
    std::vector<double> thresholds(scores.begin(), scores.end());
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    double positives = 0;
    for (bool b : labels) positives += b;

    double area = 0.0, prev_recall = 0.0;
    for (double tau : thresholds) {
        double tp = 0, fp = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (scores[i] >= tau) {
                if (labels[i]) ++tp;
                else ++fp;
            }
        }
        const double precision = tp / (tp + fp);
        const double recall = tp / positives;
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    return area;
}

// All eleven (kind, variant) combinations.
inline std::vector<std::pair<ekge::ModelKind, ekge::Variant>> all_model_variants() {
    using ekge::ModelKind;
    using ekge::Variant;
    return {{ModelKind::dist_mult, Variant::episodic}, {ModelKind::hole, Variant::episodic},
            {ModelKind::complex, Variant::episodic},   {ModelKind::tucker, Variant::episodic},
            {ModelKind::tree, Variant::episodic},      {ModelKind::cont, Variant::episodic},
            {ModelKind::dist_mult, Variant::semantic}, {ModelKind::hole, Variant::semantic},
            {ModelKind::complex, Variant::semantic},   {ModelKind::tucker, Variant::semantic},
            {ModelKind::rescal, Variant::semantic}};
}

inline ekge::Vocabulary make_vocab(Index ne, Index np, Index nt) {
    ekge::Vocabulary v;
    for (Index e = 0; e < ne; ++e) v.add_entity("e" + std::to_string(e));
    for (Index p = 0; p < np; ++p) v.add_predicate("p" + std::to_string(p));
    for (Index t = 0; t < nt; ++t) v.add_timestamp("t" + std::to_string(t));
    return v;
}

inline Quadruple random_quadruple(const ekge::Vocabulary& v, ekge::Rng& rng) {
    return {static_cast<Index>(ekge::uniform_index(rng, v.num_timestamps())),
            static_cast<Index>(ekge::uniform_index(rng, v.num_entities())),
            static_cast<Index>(ekge::uniform_index(rng, v.num_predicates())),
            static_cast<Index>(ekge::uniform_index(rng, v.num_entities())), true};
}

inline Triple random_triple(const ekge::Vocabulary& v, ekge::Rng& rng) {
    auto q = random_quadruple(v, rng);
    return {q.s, q.p, q.o, true};
}

}  // namespace oracle
