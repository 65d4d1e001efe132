// Episodic and semantic datasets plus the derivations between them:
// span extraction, semantic projection targets, start/end tensors, and
// the rare-event subset.
#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <tuple>
#include <vector>

#include "ekge/common.hpp"
#include "ekge/types.hpp"
#include "ekge/vocabulary.hpp"

namespace ekge {

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

struct EpisodicDataset {
    VocabularyPtr vocab;
    std::vector<Quadruple> quadruples;

    // Last timestamp index T.
    Index last_timestamp() const { return vocab ? vocab->num_timestamps() - 1 : -1; }
    std::size_t size() const { return quadruples.size(); }
};

struct SemanticDataset {
    VocabularyPtr vocab;
    std::vector<Triple> triples;

    std::size_t size() const { return triples.size(); }
};

// Triples pinned to t = 0 so code that walks quadruples can also serve
// semantic data (semantic scoring ignores the timestamp).
inline EpisodicDataset as_pinned_quadruples(const SemanticDataset& ds) {
    EpisodicDataset out{ds.vocab, {}};
    out.quadruples.reserve(ds.triples.size());
    for (const auto& tr : ds.triples) out.quadruples.push_back({0, tr.s, tr.p, tr.o, tr.value});
    return out;
}

// Maximal runs of consecutive timestamps per (s,p,o). A run that reaches
// the last timestamp is open. Only true quadruples contribute.
inline std::vector<EventSpan> spans_from_quadruples(const EpisodicDataset& ds) {
    std::map<std::tuple<Index, Index, Index>, std::vector<Index>> times;
    for (const auto& q : ds.quadruples) {
        if (q.value) times[{q.s, q.p, q.o}].push_back(q.t);
    }
    const Index T = ds.last_timestamp();
    std::vector<EventSpan> spans;
    for (auto& [key, ts] : times) {
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        std::size_t i = 0;
        while (i < ts.size()) {
            std::size_t j = i;
            while (j + 1 < ts.size() && ts[j + 1] == ts[j] + 1) ++j;
            EventSpan span;
            std::tie(span.s, span.p, span.o) = key;
            span.t_start = ts[i];
            span.t_end = ts[j];
            span.open = (ts[j] == T);
            spans.push_back(span);
            i = j + 1;
        }
    }
    return spans;
}

// Current facts: open spans become positive triples; (s,p,o) seen only in
// terminated spans become negative triples. When a triple has both an open
// and a closed span, the open one wins.
inline SemanticDataset derive_semantic(const EpisodicDataset& ds) {
    std::map<std::tuple<Index, Index, Index>, bool> current;
    for (const auto& span : spans_from_quadruples(ds)) {
        auto [it, inserted] = current.try_emplace({span.s, span.p, span.o}, span.open);
        if (!inserted) it->second = it->second || span.open;
    }
    SemanticDataset out;
    out.vocab = ds.vocab;
    for (const auto& [key, is_current] : current) {
        Triple tr;
        std::tie(tr.s, tr.p, tr.o) = key;
        tr.value = is_current;
        out.triples.push_back(tr);
    }
    return out;
}

// Splits the episodic tensor into a start tensor (every span contributes
// its first timestamp) and an end tensor (only terminated spans contribute
// their last timestamp). Both share the input vocabulary.
inline std::pair<EpisodicDataset, EpisodicDataset> build_start_end(const EpisodicDataset& ds) {
    EpisodicDataset start{ds.vocab, {}};
    EpisodicDataset end{ds.vocab, {}};
    for (const auto& span : spans_from_quadruples(ds)) {
        start.quadruples.push_back({span.t_start, span.s, span.p, span.o, true});
        if (!span.open) end.quadruples.push_back({span.t_end, span.s, span.p, span.o, true});
    }
    return {std::move(start), std::move(end)};
}

// Keeps only facts whose (s,p,o) holds at fewer than max_occurrences
// timestamps in total.
inline EpisodicDataset filter_rare(const EpisodicDataset& ds, int max_occurrences = 3) {
    if (max_occurrences < 1) throw std::invalid_argument("filter_rare: max_occurrences must be >= 1");
    std::map<std::tuple<Index, Index, Index>, int> counts;
    for (const auto& q : ds.quadruples) {
        if (q.value) ++counts[{q.s, q.p, q.o}];
    }
    EpisodicDataset out{ds.vocab, {}};
    for (const auto& q : ds.quadruples) {
        auto it = counts.find({q.s, q.p, q.o});
        const int c = it == counts.end() ? 0 : it->second;
        if (c < max_occurrences) out.quadruples.push_back(q);
    }
    return out;
}

}  // namespace ekge
