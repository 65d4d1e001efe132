// Seeded train/valid/test partitioning with an optional entity-frequency
// floor applied before the split.
#pragma once

#include <array>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "ekge/common.hpp"
#include "ekge/dataset.hpp"

namespace ekge {

struct SplitResult {
    EpisodicDataset train, valid, test;
};

// Drops quadruples whose subject or object appears (as either endpoint)
// fewer than min_count times in the whole dataset.
inline EpisodicDataset apply_frequency_floor(const EpisodicDataset& ds, int min_count) {
    if (min_count <= 0) return ds;
    std::unordered_map<Index, int> freq;
    for (const auto& q : ds.quadruples) {
        ++freq[q.s];
        ++freq[q.o];
    }
    EpisodicDataset out{ds.vocab, {}};
    for (const auto& q : ds.quadruples) {
        if (freq[q.s] >= min_count && freq[q.o] >= min_count) out.quadruples.push_back(q);
    }
    return out;
}

// Disjoint partition of the quadruples, deterministic per seed. Split sizes
// are floor(fraction * n) with the remainder assigned by largest fractional
// part, so exact fractions come out exact.
inline SplitResult split_dataset(const EpisodicDataset& ds, std::array<double, 3> fractions,
                                 std::uint64_t seed, int min_entity_count = 0) {
    double sum = fractions[0] + fractions[1] + fractions[2];
    if (fractions[0] <= 0 || fractions[1] <= 0 || fractions[2] <= 0 || std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("split_dataset: fractions must be positive and sum to 1");
    }
    EpisodicDataset pool = apply_frequency_floor(ds, min_entity_count);
    const std::size_t n = pool.quadruples.size();

    std::array<std::size_t, 3> sizes{};
    std::array<std::pair<double, int>, 3> remainders;
    std::size_t assigned = 0;
    for (int i = 0; i < 3; ++i) {
        const double exact = fractions[i] * static_cast<double>(n);
        sizes[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
        remainders[i] = {exact - static_cast<double>(sizes[i]), i};
        assigned += sizes[i];
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++sizes[remainders[r % 3].second];
    if (sizes[0] == 0 || sizes[1] == 0 || sizes[2] == 0) {
        throw DataError("split_dataset: a partition would be empty (" + std::to_string(n) + " quadruples)");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng = seeded_rng(seed, /*stream_tag=*/0x5717);
    for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[uniform_index(rng, i)]);
    }

    SplitResult out{{ds.vocab, {}}, {ds.vocab, {}}, {ds.vocab, {}}};
    for (std::size_t i = 0; i < n; ++i) {
        const Quadruple& q = pool.quadruples[order[i]];
        if (i < sizes[0]) out.train.quadruples.push_back(q);
        else if (i < sizes[0] + sizes[1]) out.valid.quadruples.push_back(q);
        else out.test.quadruples.push_back(q);
    }
    return out;
}

}  // namespace ekge
