// Negative sampling by single-slot corruption under the local closed-world
// assumption: a corrupted fact is usable as a negative unless the index
// knows it to be true.
#pragma once

#include <vector>

#include "ekge/common.hpp"
#include "ekge/filter_index.hpp"
#include "ekge/vocabulary.hpp"

namespace ekge {

// Draws k negatives per requested slot, each uniform over the candidates of
// that slot that are not known-true. Retries on collision, falling back to
// explicit enumeration of the untrue candidates when rejection sampling
// keeps colliding.
inline std::vector<Quadruple> sample_negatives(const Quadruple& q, const Vocabulary& vocab,
                                               const std::vector<FactSlot>& slots, int k,
                                               const FilterIndex& filter, Rng& rng) {
    if (k < 1) throw std::invalid_argument("sample_negatives: k must be >= 1");
    std::vector<Quadruple> out;
    out.reserve(slots.size() * static_cast<std::size_t>(k));
    for (FactSlot slot : slots) {
        if (slot == FactSlot::predicate) throw std::invalid_argument("sample_negatives: predicate corruption is not used");
        const Index domain = slot == FactSlot::timestamp ? vocab.num_timestamps() : vocab.num_entities();
        if (domain < 2) throw std::invalid_argument(std::string("sample_negatives: ") + slot_name(slot) + " domain has fewer than 2 members");
        const Index original = slot == FactSlot::subject ? q.s : slot == FactSlot::object ? q.o : q.t;
        for (int draw = 0; draw < k; ++draw) {
            Index picked = -1;
            constexpr int kMaxRejections = 64;
            for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
                const Index c = static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(domain)));
                if (c == original || filter.is_true(q, slot, c)) continue;
                picked = c;
                break;
            }
            if (picked < 0) {
                // Enumerate the untrue candidates and draw among them.
                std::vector<Index> pool;
                for (Index c = 0; c < domain; ++c) {
                    if (c != original && !filter.is_true(q, slot, c)) pool.push_back(c);
                }
                if (pool.empty()) {
                    throw DataError(std::string("sample_negatives: every ") + slot_name(slot) +
                                    " candidate is a known-true fact");
                }
                picked = pool[uniform_index(rng, pool.size())];
            }
            Quadruple neg = q;
            neg.value = false;
            switch (slot) {
                case FactSlot::subject: neg.s = picked; break;
                case FactSlot::object: neg.o = picked; break;
                case FactSlot::timestamp: neg.t = picked; break;
                case FactSlot::predicate: break;
            }
            out.push_back(neg);
        }
    }
    return out;
}

}  // namespace ekge
