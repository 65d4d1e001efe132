// Deterministic synthetic episodic datasets, generated span-first so the
// intended span structure is known exactly.
#pragma once

#include <set>
#include <iomanip>
#include <sstream>

#include "ekge/common.hpp"
#include "ekge/dataset.hpp"

namespace ekge {

struct SynthSpec {
    Index num_entities = 2;
    Index num_predicates = 1;
    Index num_timestamps = 4;
    int num_spans = 1;
    int min_span_length = 1;  // span length drawn uniformly from [min,max]
    int max_span_length = 1;
    std::uint64_t seed = 0;
};

struct SynthResult {
    EpisodicDataset dataset;
    std::vector<EventSpan> spans;
};

namespace detail {
inline std::string padded(const char* prefix, Index i, int width) {
    std::ostringstream os;
    os << prefix << std::setw(width) << std::setfill('0') << i;
    return os.str();
}
}  // namespace detail

// Draws num_spans spans over distinct (s,p,o) triples, then expands each to
// one quadruple per covered timestamp. Distinct triples keep generated spans
// from merging, so spans_from_quadruples() reproduces the generated list.
// With num_spans >= 2 the first span is forced open and the second closed.
inline SynthResult synth_generate(const SynthSpec& spec) {
    if (spec.num_entities < 1 || spec.num_predicates < 1 || spec.num_timestamps < 1 || spec.num_spans < 1) {
        throw std::invalid_argument("synth_generate: all counts must be >= 1");
    }
    if (spec.min_span_length < 1 || spec.max_span_length < spec.min_span_length) {
        throw std::invalid_argument("synth_generate: bad span-length range");
    }
    const long long capacity = static_cast<long long>(spec.num_entities) * spec.num_entities * spec.num_predicates;
    if (spec.num_spans > capacity) {
        throw std::invalid_argument("synth_generate: num_spans exceeds the number of distinct (s,p,o) triples");
    }
    if (spec.num_spans >= 2 && spec.num_timestamps < 2) {
        throw std::invalid_argument("synth_generate: need >= 2 timestamps to force both an open and a closed span");
    }

    auto vocab = std::make_shared<Vocabulary>();
    for (Index e = 0; e < spec.num_entities; ++e) vocab->add_entity(detail::padded("e", e, 4));
    for (Index p = 0; p < spec.num_predicates; ++p) vocab->add_predicate(detail::padded("p", p, 3));
    for (Index t = 0; t < spec.num_timestamps; ++t) vocab->add_timestamp(detail::padded("", t, 5));
    const Index T = spec.num_timestamps - 1;

    Rng rng = seeded_rng(spec.seed, /*stream_tag=*/0x5e9745);
    std::set<std::tuple<Index, Index, Index>> used;
    SynthResult out;
    for (int i = 0; i < spec.num_spans; ++i) {
        EventSpan span;
        do {
            span.s = static_cast<Index>(uniform_index(rng, spec.num_entities));
            span.p = static_cast<Index>(uniform_index(rng, spec.num_predicates));
            span.o = static_cast<Index>(uniform_index(rng, spec.num_entities));
        } while (!used.insert({span.s, span.p, span.o}).second);

        const int len = spec.min_span_length +
                        static_cast<int>(uniform_index(rng, spec.max_span_length - spec.min_span_length + 1));
        if (i == 0 && spec.num_spans >= 2) {
            // forced open: ends at T
            span.t_end = T;
            span.t_start = std::max<Index>(0, T - (len - 1));
        } else if (i == 1 && spec.num_spans >= 2) {
            // forced closed: ends strictly before T, truncating if len doesn't fit
            const Index last_fit = T - static_cast<Index>(len);
            span.t_end = last_fit >= 0 ? last_fit - static_cast<Index>(uniform_index(rng, last_fit + 1)) + len - 1
                                       : static_cast<Index>(uniform_index(rng, T));
            span.t_start = std::max<Index>(0, span.t_end - (len - 1));
        } else {
            // spans keep their sampled length exactly whenever it fits
            const Index slack = std::max<Index>(0, spec.num_timestamps - static_cast<Index>(len));
            span.t_start = static_cast<Index>(uniform_index(rng, slack + 1));
            span.t_end = std::min<Index>(T, span.t_start + (len - 1));
        }
        span.open = (span.t_end == T);
        out.spans.push_back(span);
        for (Index t = span.t_start; t <= span.t_end; ++t) {
            out.dataset.quadruples.push_back({t, span.s, span.p, span.o, true});
        }
    }
    out.dataset.vocab = vocab;
    std::sort(out.spans.begin(), out.spans.end());
    return out;
}

}  // namespace ekge
