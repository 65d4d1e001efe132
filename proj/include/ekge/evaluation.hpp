// Ranking-based retrieval metrics (MRR, Hits@k, raw and filtered), plus
// precision-recall summaries for classification-style scoring.
//
// Tie handling in ranks: rank = 1 + #(strictly greater) + ceil(#equal/2)
// over the surviving non-true candidates, which keeps tied scores from
// rewarding insertion order.
#pragma once

#include <cmath>
#include <functional>
#include <numeric>

#include "ekge/filter_index.hpp"
#include "ekge/loss.hpp"
#include "ekge/scoring.hpp"

namespace ekge {

enum class RankingMode { raw, filtered };

inline const char* ranking_mode_name(RankingMode m) { return m == RankingMode::raw ? "raw" : "filtered"; }

// Supported ranking targets; `entity` pools subject- and object-corruption
// ranks.
enum class EvalSlot { subject, object, predicate, timestamp, entity };

inline const char* eval_slot_name(EvalSlot s) {
    switch (s) {
        case EvalSlot::subject: return "subject";
        case EvalSlot::object: return "object";
        case EvalSlot::predicate: return "predicate";
        case EvalSlot::timestamp: return "timestamp";
        case EvalSlot::entity: return "entity";
    }
    return "?";
}

inline EvalSlot parse_eval_slot(const std::string& name) {
    for (EvalSlot s : {EvalSlot::subject, EvalSlot::object, EvalSlot::predicate, EvalSlot::timestamp,
                       EvalSlot::entity}) {
        if (name == eval_slot_name(s)) return s;
    }
    throw std::invalid_argument("unknown eval slot: " + name);
}

struct SlotMetrics {
    double mrr = 0.0;
    double hits1 = 0.0;
    double hits3 = 0.0;
    double hits10 = 0.0;
    std::size_t count = 0;

    void absorb_rank(int rank) {
        mrr += 1.0 / rank;
        hits1 += rank <= 1;
        hits3 += rank <= 3;
        hits10 += rank <= 10;
        ++count;
    }
    void finalize() {
        if (count == 0) return;
        mrr /= count;
        hits1 /= count;
        hits3 /= count;
        hits10 /= count;
    }
};

using Metrics = std::map<EvalSlot, SlotMetrics>;

namespace detail {

// Shared rank computation: candidate_score(i) scores candidate i of the
// slot domain, skip(i) removes known-true competitors in filtered mode.
template <typename ScoreFn, typename SkipFn>
int midrank(Index true_index, Index domain, ScoreFn&& candidate_score, SkipFn&& skip) {
    const double true_score = candidate_score(true_index);
    std::int64_t greater = 0, equal = 0;
    for (Index c = 0; c < domain; ++c) {
        if (c == true_index || skip(c)) continue;
        const double sc = candidate_score(c);
        if (sc > true_score) ++greater;
        else if (sc == true_score) ++equal;
    }
    return static_cast<int>(1 + greater + (equal + 1) / 2);
}

inline FactSlot to_fact_slot(EvalSlot s) {
    switch (s) {
        case EvalSlot::subject: return FactSlot::subject;
        case EvalSlot::object: return FactSlot::object;
        case EvalSlot::predicate: return FactSlot::predicate;
        case EvalSlot::timestamp: return FactSlot::timestamp;
        default: throw std::invalid_argument("entity pseudo-slot has no single fact slot");
    }
}

}  // namespace detail

// Rank of the true completion of `q` at `slot` among all candidates of
// that slot's domain, 1-based. Filtered mode removes candidates that the
// index knows to be true elsewhere.
inline int rank_slot(const ModelParams& P, const Quadruple& q, FactSlot slot, const FilterIndex& filter,
                     RankingMode mode, TimeSide side = TimeSide::start) {
    Index domain, true_index;
    switch (slot) {
        case FactSlot::subject: domain = P.num_entities; true_index = q.s; break;
        case FactSlot::object: domain = P.num_entities; true_index = q.o; break;
        case FactSlot::predicate: domain = P.num_predicates; true_index = q.p; break;
        case FactSlot::timestamp: domain = P.num_timestamps; true_index = q.t; break;
        default: throw std::invalid_argument("rank_slot: bad slot");
    }
    auto with = [&](Index c) {
        Quadruple r = q;
        switch (slot) {
            case FactSlot::subject: r.s = c; break;
            case FactSlot::object: r.o = c; break;
            case FactSlot::predicate: r.p = c; break;
            case FactSlot::timestamp: r.t = c; break;
        }
        return r;
    };
    return detail::midrank(
        true_index, domain, [&](Index c) { return score_fact(P, with(c), side); },
        [&](Index c) { return mode == RankingMode::filtered && filter.is_true(q, slot, c); });
}

// Metrics over the positive facts of a dataset for each requested slot.
inline Metrics evaluate(const ModelParams& P, const EpisodicDataset& ds, const std::vector<EvalSlot>& slots,
                        const FilterIndex& filter, RankingMode mode, unsigned threads = 1,
                        TimeSide side = TimeSide::start) {
    std::vector<const Quadruple*> facts;
    for (const auto& q : ds.quadruples) {
        if (q.value) facts.push_back(&q);
    }

    std::vector<FactSlot> base_slots;
    auto want = [&](FactSlot s) {
        if (std::find(base_slots.begin(), base_slots.end(), s) == base_slots.end()) base_slots.push_back(s);
    };
    for (EvalSlot s : slots) {
        if (s == EvalSlot::entity) {
            want(FactSlot::subject);
            want(FactSlot::object);
        } else {
            want(detail::to_fact_slot(s));
        }
    }

    // ranks[i] holds fact i's ranks in base_slots order
    filter.prepare();
    std::vector<std::vector<int>> ranks(facts.size(), std::vector<int>(base_slots.size(), 0));
    parallel_for(facts.size(), threads, [&](std::size_t i) {
        for (std::size_t k = 0; k < base_slots.size(); ++k) {
            ranks[i][k] = rank_slot(P, *facts[i], base_slots[k], filter, mode, side);
        }
    });

    auto slot_pos = [&](FactSlot s) {
        return static_cast<std::size_t>(std::find(base_slots.begin(), base_slots.end(), s) - base_slots.begin());
    };
    Metrics out;
    for (EvalSlot s : slots) {
        SlotMetrics m;
        if (s == EvalSlot::entity) {
            const std::size_t a = slot_pos(FactSlot::subject), b = slot_pos(FactSlot::object);
            for (const auto& r : ranks) {
                m.absorb_rank(r[a]);
                m.absorb_rank(r[b]);
            }
        } else {
            const std::size_t a = slot_pos(detail::to_fact_slot(s));
            for (const auto& r : ranks) m.absorb_rank(r[a]);
        }
        m.finalize();
        out[s] = m;
    }
    return out;
}

// Mean of the per-slot filtered MRRs; the early-stopping signal.
inline double mean_mrr(const Metrics& metrics) {
    if (metrics.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& [slot, m] : metrics) acc += m.mrr;
    return acc / static_cast<double>(metrics.size());
}

struct PRPoint {
    double threshold = 0.0;  // lowest score admitted at this step
    double precision = 0.0;
    double recall = 0.0;
};

struct PRCurve {
    std::vector<PRPoint> points;
    double auprc = 0.0;
};

// Precision-recall sweep over descending score thresholds; tied scores
// collapse into a single step. Area uses the step rule: each recall
// increment is credited with the precision at its right endpoint.
inline PRCurve pr_curve(const std::vector<double>& scores, const std::vector<bool>& labels) {
    if (scores.size() != labels.size()) throw std::invalid_argument("pr_curve: size mismatch");
    std::size_t positives = 0;
    for (bool b : labels) positives += b;
    if (positives == 0 || positives == labels.size()) {
        throw std::invalid_argument("pr_curve: need at least one positive and one negative");
    }
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    PRCurve out;
    double tp = 0, fp = 0;
    double prev_recall = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            if (labels[order[j]]) ++tp;
            else ++fp;
            ++j;
        }
        const double precision = tp / (tp + fp);
        const double recall = tp / static_cast<double>(positives);
        out.points.push_back({scores[order[i]], precision, recall});
        out.auprc += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j;
    }
    return out;
}

inline double auprc(const std::vector<double>& scores, const std::vector<bool>& labels) {
    return pr_curve(scores, labels).auprc;
}

// Fraction of positives scoring strictly above tau.
inline double recall_at(const std::vector<double>& scores, const std::vector<bool>& labels, double tau = 0.5) {
    if (scores.size() != labels.size()) throw std::invalid_argument("recall_at: size mismatch");
    std::size_t positives = 0, recovered = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        ++positives;
        recovered += scores[i] > tau;
    }
    if (positives == 0) throw std::invalid_argument("recall_at: no positives");
    return static_cast<double>(recovered) / static_cast<double>(positives);
}

}  // namespace ekge
