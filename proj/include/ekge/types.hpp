// Core fact types and model taxonomy.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>

namespace ekge {

using Index = std::int32_t;

// One cell of the 4-way episodic adjacency tensor: a timestamped fact
// (subject, predicate, object) @ timestamp with a truth label.
struct Quadruple {
    Index t = 0;
    Index s = 0;
    Index p = 0;
    Index o = 0;
    bool value = true;

    friend bool operator==(const Quadruple& a, const Quadruple& b) {
        return a.t == b.t && a.s == b.s && a.p == b.p && a.o == b.o && a.value == b.value;
    }
    friend auto operator<=>(const Quadruple& a, const Quadruple& b) {
        return std::tie(a.t, a.s, a.p, a.o, a.value) <=> std::tie(b.t, b.s, b.p, b.o, b.value);
    }
};

// One cell of the 3-way semantic adjacency tensor: a timeless fact.
struct Triple {
    Index s = 0;
    Index p = 0;
    Index o = 0;
    bool value = true;

    friend bool operator==(const Triple& a, const Triple& b) {
        return a.s == b.s && a.p == b.p && a.o == b.o && a.value == b.value;
    }
    friend auto operator<=>(const Triple& a, const Triple& b) {
        return std::tie(a.s, a.p, a.o, a.value) <=> std::tie(b.s, b.p, b.o, b.value);
    }
};

// A maximal run of consecutive timestamps over which a triple holds.
// An open span persists through the last timestamp T (t_end == T).
struct EventSpan {
    Index s = 0;
    Index p = 0;
    Index o = 0;
    Index t_start = 0;
    Index t_end = 0;
    bool open = false;

    friend bool operator==(const EventSpan&, const EventSpan&) = default;
    friend auto operator<=>(const EventSpan& a, const EventSpan& b) {
        return std::tie(a.s, a.p, a.o, a.t_start, a.t_end, a.open) <=>
               std::tie(b.s, b.p, b.o, b.t_start, b.t_end, b.open);
    }
};

// Embedding dimensions: dim for entities/predicates, dim_t for timestamps.
struct Rank {
    int dim = 0;
    int dim_t = 0;

    Rank() = default;
    explicit Rank(int r) : dim(r), dim_t(r) {}
    Rank(int r, int rt) : dim(r), dim_t(rt) {}
    friend bool operator==(const Rank&, const Rank&) = default;
};

enum class ModelKind { dist_mult, hole, complex, tucker, rescal, tree, cont };
enum class Variant { semantic, episodic };

inline bool kind_supports(ModelKind kind, Variant variant) {
    switch (kind) {
        case ModelKind::rescal: return variant == Variant::semantic;
        case ModelKind::tree:
        case ModelKind::cont: return variant == Variant::episodic;
        default: return true;
    }
}

// Compositional models share one dimensionality across all embedding roles.
inline bool kind_requires_uniform_rank(ModelKind kind) {
    return kind == ModelKind::dist_mult || kind == ModelKind::hole || kind == ModelKind::complex;
}

inline std::string kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::dist_mult: return "distmult";
        case ModelKind::hole: return "hole";
        case ModelKind::complex: return "complex";
        case ModelKind::tucker: return "tucker";
        case ModelKind::rescal: return "rescal";
        case ModelKind::tree: return "tree";
        case ModelKind::cont: return "cont";
    }
    return "?";
}

inline std::string variant_name(Variant v) {
    return v == Variant::semantic ? "sem" : "epi";
}

inline std::string model_name(ModelKind kind, Variant variant) {
    return kind_name(kind) + "-" + variant_name(variant);
}

// Parses names like "cont-epi" or "rescal-sem".
inline std::pair<ModelKind, Variant> parse_model_name(const std::string& name) {
    auto dash = name.rfind('-');
    if (dash == std::string::npos) throw std::invalid_argument("model name must look like 'distmult-epi': " + name);
    const std::string kind_part = name.substr(0, dash);
    const std::string var_part = name.substr(dash + 1);
    Variant variant;
    if (var_part == "epi") variant = Variant::episodic;
    else if (var_part == "sem") variant = Variant::semantic;
    else throw std::invalid_argument("unknown model variant: " + var_part);
    for (ModelKind k : {ModelKind::dist_mult, ModelKind::hole, ModelKind::complex, ModelKind::tucker,
                        ModelKind::rescal, ModelKind::tree, ModelKind::cont}) {
        if (kind_name(k) == kind_part) {
            if (!kind_supports(k, variant)) throw std::invalid_argument("model " + name + " is not defined");
            return {k, variant};
        }
    }
    throw std::invalid_argument("unknown model kind: " + kind_part);
}

}  // namespace ekge
