// Index of known-true facts, keyed by each partial pattern with one slot
// left open. Backs filtered ranking and collision checks during negative
// sampling. Semantic triples are handled as quadruples pinned to t = 0.
#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ekge/dataset.hpp"

namespace ekge {

enum class FactSlot { subject, object, predicate, timestamp };

inline const char* slot_name(FactSlot slot) {
    switch (slot) {
        case FactSlot::subject: return "subject";
        case FactSlot::object: return "object";
        case FactSlot::predicate: return "predicate";
        case FactSlot::timestamp: return "timestamp";
    }
    return "?";
}

inline FactSlot parse_slot(const std::string& name) {
    for (FactSlot s : {FactSlot::subject, FactSlot::object, FactSlot::predicate, FactSlot::timestamp}) {
        if (name == slot_name(s)) return s;
    }
    throw std::invalid_argument("unknown slot: " + name);
}

class FilterIndex {
public:
    FilterIndex() = default;

    void add(const Quadruple& q) {
        if (!q.value) return;
        by_slot_[0][pack(q.p, q.o, q.t)].push_back(q.s);
        by_slot_[1][pack(q.s, q.p, q.t)].push_back(q.o);
        by_slot_[2][pack(q.s, q.o, q.t)].push_back(q.p);
        by_slot_[3][pack(q.s, q.p, q.o)].push_back(q.t);
        dirty_ = true;
    }

    void add(const EpisodicDataset& ds) {
        for (const auto& q : ds.quadruples) add(q);
    }

    // Positive triples become quadruples at t = 0.
    void add(const SemanticDataset& ds) {
        for (const auto& tr : ds.triples) {
            if (tr.value) add(Quadruple{0, tr.s, tr.p, tr.o, true});
        }
    }

    // Sorts and deduplicates the completion lists. Queries call this
    // lazily; call it once up front before sharing the index across
    // threads, since the first query after add() mutates internal state.
    void prepare() const { finalize(); }

    // Completions of the pattern obtained by blanking `slot` in q.
    const std::vector<Index>& completions(const Quadruple& q, FactSlot slot) const {
        finalize();
        static const std::vector<Index> empty;
        const auto& m = by_slot_[static_cast<int>(slot)];
        auto it = m.find(pack_pattern(q, slot));
        return it == m.end() ? empty : it->second;
    }

    // True iff the quadruple obtained by setting `slot` of q to `candidate`
    // is a known-true fact.
    bool is_true(const Quadruple& q, FactSlot slot, Index candidate) const {
        const auto& c = completions(q, slot);
        return std::binary_search(c.begin(), c.end(), candidate);
    }

    bool contains(const Quadruple& q) const { return is_true(q, FactSlot::object, q.o); }
    bool contains(const Triple& tr) const { return contains(Quadruple{0, tr.s, tr.p, tr.o, true}); }

private:
    static std::uint64_t pack(Index a, Index b, Index c) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 42) |
               (static_cast<std::uint64_t>(static_cast<std::uint32_t>(b)) << 21) |
               static_cast<std::uint64_t>(static_cast<std::uint32_t>(c));
    }

    static std::uint64_t pack_pattern(const Quadruple& q, FactSlot slot) {
        switch (slot) {
            case FactSlot::subject: return pack(q.p, q.o, q.t);
            case FactSlot::object: return pack(q.s, q.p, q.t);
            case FactSlot::predicate: return pack(q.s, q.o, q.t);
            case FactSlot::timestamp: return pack(q.s, q.p, q.o);
        }
        return 0;
    }

    void finalize() const {
        if (!dirty_) return;
        for (auto& m : by_slot_) {
            for (auto& [key, v] : m) {
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end()), v.end());
            }
        }
        dirty_ = false;
    }

    mutable std::array<std::unordered_map<std::uint64_t, std::vector<Index>>, 4> by_slot_;
    mutable bool dirty_ = false;
};

}  // namespace ekge
