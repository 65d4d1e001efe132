// Model parameter containers, closed-form parameter accounting, and
// deterministic uniform (Xavier) initialization.
//
// Init bound per table is sqrt(6/(fan_in+fan_out)) where
//   - 2-d tables (rows x dim):        fan_in = rows,              fan_out = dim
//   - vectors (dim):                  fan_in = dim,               fan_out = 1
//   - 3-/4-way tensors (... x last):  fan_in = product of leading dims,
//                                     fan_out = last dim
// Per-predicate matrices and per-timestamp cores apply the tensor rule to
// one element tensor (all elements share the same fans).
#pragma once

#include <cmath>
#include <map>

#include "ekge/common.hpp"
#include "ekge/table.hpp"
#include "ekge/types.hpp"
#include "ekge/vocabulary.hpp"

namespace ekge {

enum class Slot : std::uint8_t {
    entity_re,
    entity_im,
    predicate_re,
    predicate_im,
    time_re,
    time_im,
    time_end_re,
    time_end_im,
    lambda,      // diagonal core weights
    core,        // dense mixing tensor (3- or 4-way, flattened)
    pred_matrix, // one dim x dim matrix per predicate
    tree_g1,     // dim_t x dim x dim
    tree_g2,     // dim x dim x dim_t
    time_core,     // one dim^3 tensor per timestamp
    time_core_end, // end-time counterpart of time_core
};

inline const char* slot_tag(Slot s) {
    switch (s) {
        case Slot::entity_re: return "entity_re";
        case Slot::entity_im: return "entity_im";
        case Slot::predicate_re: return "predicate_re";
        case Slot::predicate_im: return "predicate_im";
        case Slot::time_re: return "time_re";
        case Slot::time_im: return "time_im";
        case Slot::time_end_re: return "time_end_re";
        case Slot::time_end_im: return "time_end_im";
        case Slot::lambda: return "lambda";
        case Slot::core: return "core";
        case Slot::pred_matrix: return "pred_matrix";
        case Slot::tree_g1: return "tree_g1";
        case Slot::tree_g2: return "tree_g2";
        case Slot::time_core: return "time_core";
        case Slot::time_core_end: return "time_core_end";
    }
    return "?";
}

inline Slot parse_slot_tag(const std::string& tag) {
    for (int i = 0; i <= static_cast<int>(Slot::time_core_end); ++i) {
        if (tag == slot_tag(static_cast<Slot>(i))) return static_cast<Slot>(i);
    }
    throw DataError("unknown parameter table tag: " + tag);
}

struct ModelParams {
    ModelKind kind{};
    Variant variant{};
    Rank rank;
    Index num_entities = 0, num_predicates = 0, num_timestamps = 0;
    std::uint64_t vocab_hash = 0;
    std::map<Slot, Table> tables;

    bool has(Slot s) const { return tables.count(s) != 0; }
    Table& table(Slot s) { return tables.at(s); }
    const Table& table(Slot s) const { return tables.at(s); }

    std::int64_t total_parameters() const {
        std::int64_t n = 0;
        for (const auto& [slot, t] : tables) n += t.size();
        return n;
    }
};

// Closed-form parameter totals (excludes end-time tables, which only exist
// after two-stage training).
inline std::int64_t param_count(ModelKind kind, Variant variant, Index ne, Index np, Index nt, Rank rank) {
    if (!kind_supports(kind, variant)) {
        throw std::invalid_argument("param_count: " + model_name(kind, variant) + " is not defined");
    }
    if (kind_requires_uniform_rank(kind) && rank.dim != rank.dim_t) {
        throw std::invalid_argument("param_count: " + kind_name(kind) + " requires dim == dim_t");
    }
    const std::int64_t r = rank.dim, rt = rank.dim_t;
    const std::int64_t Ne = ne, Np = np, Nt = nt;
    const bool epi = variant == Variant::episodic;
    switch (kind) {
        case ModelKind::dist_mult: return (Ne + Np + (epi ? Nt : 0) + 1) * r;
        // Time embeddings are allocated for the episodic variant even though
        // the usual accounting omits them; the scoring function needs them.
        case ModelKind::hole: return (Ne + Np + (epi ? Nt : 0)) * r;
        case ModelKind::complex: return 2 * (Ne + Np + (epi ? Nt : 0)) * r;
        case ModelKind::tucker:
            return epi ? (Ne + Np) * r + (Nt + r * r * r) * rt : (Ne + Np) * r + r * r * r;
        case ModelKind::rescal: return Ne * r + Np * r * r;
        case ModelKind::tree: return Ne * r + Np * r * r + (Nt + 2 * r * r) * rt;
        case ModelKind::cont: return (Ne + Np) * r + Nt * r * r * r;
    }
    return 0;
}

namespace detail {

inline void fill_uniform(Table& t, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(t.fan_in + t.fan_out));
    for (double& v : t.values) v = (2.0 * uniform_unit(rng) - 1.0) * bound;
}

}  // namespace detail

// Allocates the tables a model needs and fills them with uniform values on
// +/- sqrt(6/(fan_in+fan_out)). Bit-identical across runs for a fixed seed.
inline ModelParams init_params(ModelKind kind, Variant variant, const Vocabulary& vocab, Rank rank,
                               std::uint64_t seed) {
    if (!kind_supports(kind, variant)) {
        throw std::invalid_argument("init_params: " + model_name(kind, variant) + " is not defined");
    }
    if (rank.dim < 1 || rank.dim_t < 1) throw std::invalid_argument("init_params: rank components must be >= 1");
    if (kind_requires_uniform_rank(kind) && rank.dim != rank.dim_t) {
        throw std::invalid_argument("init_params: " + kind_name(kind) + " requires dim == dim_t");
    }

    ModelParams P;
    P.kind = kind;
    P.variant = variant;
    P.rank = rank;
    P.num_entities = vocab.num_entities();
    P.num_predicates = vocab.num_predicates();
    P.num_timestamps = vocab.num_timestamps();
    P.vocab_hash = vocab.hash();

    const std::int64_t ne = P.num_entities, np = P.num_predicates, nt = P.num_timestamps;
    const std::int64_t r = rank.dim, rt = rank.dim_t;
    const bool epi = variant == Variant::episodic;

    auto add = [&P](Slot slot, std::int64_t rows, std::int64_t cols, std::int64_t fi, std::int64_t fo) {
        P.tables.emplace(slot, Table(rows, cols, fi, fo));
    };

    switch (kind) {
        case ModelKind::dist_mult:
            add(Slot::entity_re, ne, r, ne, r);
            add(Slot::predicate_re, np, r, np, r);
            if (epi) add(Slot::time_re, nt, r, nt, r);
            add(Slot::lambda, 1, r, r, 1);
            break;
        case ModelKind::hole:
            add(Slot::entity_re, ne, r, ne, r);
            add(Slot::predicate_re, np, r, np, r);
            if (epi) add(Slot::time_re, nt, r, nt, r);
            break;
        case ModelKind::complex:
            add(Slot::entity_re, ne, r, ne, r);
            add(Slot::entity_im, ne, r, ne, r);
            add(Slot::predicate_re, np, r, np, r);
            add(Slot::predicate_im, np, r, np, r);
            if (epi) {
                add(Slot::time_re, nt, r, nt, r);
                add(Slot::time_im, nt, r, nt, r);
            }
            break;
        case ModelKind::tucker:
            add(Slot::entity_re, ne, r, ne, r);
            add(Slot::predicate_re, np, r, np, r);
            if (epi) {
                add(Slot::time_re, nt, rt, nt, rt);
                add(Slot::core, 1, rt * r * r * r, rt * r * r, r);
            } else {
                add(Slot::core, 1, r * r * r, r * r, r);
            }
            break;
        case ModelKind::rescal:
            add(Slot::entity_re, ne, r, ne, r);
            add(Slot::pred_matrix, np, r * r, r, r);
            break;
        case ModelKind::tree:
            add(Slot::entity_re, ne, r, ne, r);
            add(Slot::pred_matrix, np, r * r, r, r);
            add(Slot::time_re, nt, rt, nt, rt);
            add(Slot::tree_g1, 1, rt * r * r, rt * r, r);
            add(Slot::tree_g2, 1, r * r * rt, r * r, rt);
            break;
        case ModelKind::cont:
            add(Slot::entity_re, ne, r, ne, r);
            add(Slot::predicate_re, np, r, np, r);
            add(Slot::time_core, nt, r * r * r, r * r, r);
            break;
    }

    Rng rng = seeded_rng(seed, /*stream_tag=*/0x1217);
    for (auto& [slot, t] : P.tables) detail::fill_uniform(t, rng);
    return P;
}

// Allocates and initializes the end-time tables for the second training
// stage. Shapes mirror the start-time tables.
inline void add_end_time_tables(ModelParams& P, std::uint64_t seed) {
    if (P.variant != Variant::episodic) throw std::invalid_argument("end-time tables need an episodic model");
    Rng rng = seeded_rng(seed, /*stream_tag=*/0xe4d);
    auto clone_shape = [&](Slot from, Slot to) {
        const Table& src = P.table(from);
        auto [it, inserted] = P.tables.emplace(to, Table(src.rows, src.cols, src.fan_in, src.fan_out));
        if (inserted) detail::fill_uniform(it->second, rng);
    };
    switch (P.kind) {
        case ModelKind::complex:
            clone_shape(Slot::time_re, Slot::time_end_re);
            clone_shape(Slot::time_im, Slot::time_end_im);
            break;
        case ModelKind::cont:
            clone_shape(Slot::time_core, Slot::time_core_end);
            break;
        case ModelKind::dist_mult:
        case ModelKind::hole:
        case ModelKind::tucker:
            clone_shape(Slot::time_re, Slot::time_end_re);
            break;
        default:
            throw std::invalid_argument("end-time tables are not defined for " + kind_name(P.kind));
    }
}

// The slots that hold time representations (start or end side).
inline bool is_time_slot(Slot s) {
    return s == Slot::time_re || s == Slot::time_im || s == Slot::time_end_re || s == Slot::time_end_im ||
           s == Slot::time_core || s == Slot::time_core_end;
}

inline bool is_end_time_slot(Slot s) {
    return s == Slot::time_end_re || s == Slot::time_end_im || s == Slot::time_core_end;
}

}  // namespace ekge
