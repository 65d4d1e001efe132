// String <-> index maps for entities, predicates and timestamps.
// Timestamp index order is temporal order: index i is earlier than i+1.
#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "ekge/common.hpp"
#include "ekge/types.hpp"

namespace ekge {

class Vocabulary {
public:
    Index add_entity(const std::string& name) { return add(name, entities_, entity_index_); }
    Index add_predicate(const std::string& name) { return add(name, predicates_, predicate_index_); }
    Index add_timestamp(const std::string& name) { return add(name, timestamps_, timestamp_index_); }

    Index entity(const std::string& name) const { return lookup(name, entity_index_, "entity"); }
    Index predicate(const std::string& name) const { return lookup(name, predicate_index_, "predicate"); }
    Index timestamp(const std::string& name) const { return lookup(name, timestamp_index_, "timestamp"); }

    bool has_entity(const std::string& name) const { return entity_index_.count(name) != 0; }

    const std::string& entity_name(Index i) const { return entities_.at(i); }
    const std::string& predicate_name(Index i) const { return predicates_.at(i); }
    const std::string& timestamp_name(Index i) const { return timestamps_.at(i); }

    Index num_entities() const { return static_cast<Index>(entities_.size()); }
    Index num_predicates() const { return static_cast<Index>(predicates_.size()); }
    Index num_timestamps() const { return static_cast<Index>(timestamps_.size()); }

    const std::vector<std::string>& entities() const { return entities_; }
    const std::vector<std::string>& predicates() const { return predicates_; }
    const std::vector<std::string>& timestamps() const { return timestamps_; }

    bool contains(const Quadruple& q) const {
        return q.t >= 0 && q.t < num_timestamps() && q.s >= 0 && q.s < num_entities() &&
               q.p >= 0 && q.p < num_predicates() && q.o >= 0 && q.o < num_entities();
    }
    bool contains(const Triple& tr) const {
        return tr.s >= 0 && tr.s < num_entities() && tr.p >= 0 && tr.p < num_predicates() &&
               tr.o >= 0 && tr.o < num_entities();
    }

    // Fingerprint over all three name lists, order-sensitive. Checkpoints
    // carry it so a model is never evaluated against the wrong vocabulary.
    std::uint64_t hash() const {
        std::uint64_t h = 1469598103934665603ULL;
        for (const auto* names : {&entities_, &predicates_, &timestamps_}) {
            for (const auto& n : *names) {
                h = fnv1a(n, h);
                h = fnv1a(std::string_view("\x1f", 1), h);
            }
            h = fnv1a(std::string_view("\x1e", 1), h);
        }
        return h;
    }

private:
    static Index add(const std::string& name, std::vector<std::string>& names,
                     std::unordered_map<std::string, Index>& index) {
        auto it = index.find(name);
        if (it != index.end()) return it->second;
        const Index i = static_cast<Index>(names.size());
        names.push_back(name);
        index.emplace(name, i);
        return i;
    }

    static Index lookup(const std::string& name, const std::unordered_map<std::string, Index>& index,
                        const char* what) {
        auto it = index.find(name);
        if (it == index.end()) throw DataError(std::string("unknown ") + what + ": " + name);
        return it->second;
    }

    std::vector<std::string> entities_, predicates_, timestamps_;
    std::unordered_map<std::string, Index> entity_index_, predicate_index_, timestamp_index_;
};

}  // namespace ekge
