// TSV ingestion and serialization.
//
// Quadruple files: subject<TAB>predicate<TAB>object<TAB>timestamp[<TAB>0|1],
// UTF-8, lines starting with '#' ignored. Triple files drop the timestamp
// column. Vocabulary sidecars are JSON with three ordered name arrays.
#pragma once

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ekge/dataset.hpp"

namespace ekge {

enum class TimestampFormat { auto_detect, iso8601, mdy, integer };

namespace detail {

inline std::optional<long long> parse_int_field(std::string_view sv) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec != std::errc() || ptr != sv.data() + sv.size()) return std::nullopt;
    return v;
}

// Sort key is y*10000+m*100+d for dates, the value itself for integers.
inline std::optional<long long> timestamp_key(const std::string& text, TimestampFormat fmt) {
    auto date_key = [](std::string_view y, std::string_view m, std::string_view d) -> std::optional<long long> {
        auto yy = parse_int_field(y), mm = parse_int_field(m), dd = parse_int_field(d);
        if (!yy || !mm || !dd) return std::nullopt;
        if (*mm < 1 || *mm > 12 || *dd < 1 || *dd > 31 || *yy < 0) return std::nullopt;
        return *yy * 10000 + *mm * 100 + *dd;
    };
    switch (fmt) {
        case TimestampFormat::iso8601: {
            if (text.size() < 8) return std::nullopt;
            auto a = text.find('-'), b = text.rfind('-');
            if (a == std::string::npos || b == a) return std::nullopt;
            return date_key(std::string_view(text).substr(0, a),
                            std::string_view(text).substr(a + 1, b - a - 1),
                            std::string_view(text).substr(b + 1));
        }
        case TimestampFormat::mdy: {
            auto a = text.find('/'), b = text.rfind('/');
            if (a == std::string::npos || b == a) return std::nullopt;
            return date_key(std::string_view(text).substr(b + 1),
                            std::string_view(text).substr(0, a),
                            std::string_view(text).substr(a + 1, b - a - 1));
        }
        case TimestampFormat::integer: {
            auto v = parse_int_field(text);
            if (!v || *v < 0) return std::nullopt;
            return *v;
        }
        case TimestampFormat::auto_detect: break;
    }
    return std::nullopt;
}

inline TimestampFormat detect_timestamp_format(const std::string& text) {
    for (TimestampFormat fmt : {TimestampFormat::iso8601, TimestampFormat::mdy, TimestampFormat::integer}) {
        if (timestamp_key(text, fmt)) return fmt;
    }
    throw DataError("unrecognized timestamp format: \"" + text + "\"");
}

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        auto tab = line.find('\t', pos);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, tab - pos));
        pos = tab + 1;
    }
    return fields;
}

struct RawFact {
    std::string s, p, o, t;
    bool value;
    std::size_t line_no;
};

inline std::vector<RawFact> read_fact_lines(const std::string& path, bool with_timestamp) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    const std::size_t base_fields = with_timestamp ? 4 : 3;
    std::vector<RawFact> facts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_tabs(line);
        if (fields.size() != base_fields && fields.size() != base_fields + 1) {
            throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(base_fields) + " or " + std::to_string(base_fields + 1) +
                            " tab-separated fields, got " + std::to_string(fields.size()));
        }
        RawFact f;
        f.s = fields[0];
        f.p = fields[1];
        f.o = fields[2];
        f.t = with_timestamp ? fields[3] : std::string();
        f.value = true;
        if (fields.size() == base_fields + 1) {
            const std::string& v = fields[base_fields];
            if (v == "1") f.value = true;
            else if (v == "0") f.value = false;
            else throw DataError(path + ":" + std::to_string(line_no) + ": value field must be 0 or 1, got \"" + v + "\"");
        }
        f.line_no = line_no;
        facts.push_back(std::move(f));
    }
    return facts;
}

}  // namespace detail

// Loads a quadruple TSV and builds a fresh vocabulary. Entities and
// predicates are indexed in first-appearance order; timestamps are sorted
// ascending by their parsed date (or integer) value.
inline EpisodicDataset load_quadruples(const std::string& path,
                                       TimestampFormat fmt = TimestampFormat::auto_detect) {
    auto facts = detail::read_fact_lines(path, true);
    auto vocab = std::make_shared<Vocabulary>();
    if (facts.empty()) return {vocab, {}};

    if (fmt == TimestampFormat::auto_detect) fmt = detail::detect_timestamp_format(facts.front().t);

    std::map<std::string, long long> stamp_keys;
    for (const auto& f : facts) {
        auto key = detail::timestamp_key(f.t, fmt);
        if (!key) throw DataError(path + ":" + std::to_string(f.line_no) + ": unparseable timestamp \"" + f.t + "\"");
        stamp_keys.emplace(f.t, *key);
    }
    std::vector<std::pair<long long, std::string>> ordered;
    ordered.reserve(stamp_keys.size());
    for (const auto& [label, key] : stamp_keys) ordered.emplace_back(key, label);
    std::sort(ordered.begin(), ordered.end());
    for (const auto& [key, label] : ordered) vocab->add_timestamp(label);

    EpisodicDataset ds;
    std::map<std::tuple<Index, Index, Index, Index>, bool> seen;
    for (const auto& f : facts) {
        Quadruple q;
        q.s = vocab->add_entity(f.s);
        q.p = vocab->add_predicate(f.p);
        q.o = vocab->add_entity(f.o);
        q.t = vocab->timestamp(f.t);
        q.value = f.value;
        auto [it, inserted] = seen.try_emplace({q.t, q.s, q.p, q.o}, q.value);
        if (!inserted) {
            if (it->second != q.value) {
                throw DataError(path + ":" + std::to_string(f.line_no) + ": contradicts an earlier value for (" +
                                f.s + ", " + f.p + ", " + f.o + ", " + f.t + ")");
            }
            continue;  // identical duplicate, drop silently
        }
        ds.quadruples.push_back(q);
    }
    ds.vocab = vocab;
    return ds;
}

// Loads a quadruple TSV against an existing vocabulary (e.g. a prepared
// split). Unknown names are an error.
inline EpisodicDataset load_quadruples(const std::string& path, VocabularyPtr vocab) {
    auto facts = detail::read_fact_lines(path, true);
    EpisodicDataset ds;
    ds.vocab = vocab;
    for (const auto& f : facts) {
        try {
            ds.quadruples.push_back({vocab->timestamp(f.t), vocab->entity(f.s), vocab->predicate(f.p),
                                     vocab->entity(f.o), f.value});
        } catch (const DataError& e) {
            throw DataError(path + ":" + std::to_string(f.line_no) + ": " + e.what());
        }
    }
    return ds;
}

inline SemanticDataset load_triples(const std::string& path, VocabularyPtr vocab) {
    auto facts = detail::read_fact_lines(path, false);
    SemanticDataset ds;
    ds.vocab = vocab;
    for (const auto& f : facts) {
        try {
            ds.triples.push_back({vocab->entity(f.s), vocab->predicate(f.p), vocab->entity(f.o), f.value});
        } catch (const DataError& e) {
            throw DataError(path + ":" + std::to_string(f.line_no) + ": " + e.what());
        }
    }
    return ds;
}

inline void save_quadruples(const std::string& path, const EpisodicDataset& ds) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    const auto& v = *ds.vocab;
    for (const auto& q : ds.quadruples) {
        out << v.entity_name(q.s) << '\t' << v.predicate_name(q.p) << '\t' << v.entity_name(q.o) << '\t'
            << v.timestamp_name(q.t);
        if (!q.value) out << "\t0";
        out << '\n';
    }
}

inline void save_triples(const std::string& path, const SemanticDataset& ds, bool with_labels = true) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    const auto& v = *ds.vocab;
    for (const auto& tr : ds.triples) {
        out << v.entity_name(tr.s) << '\t' << v.predicate_name(tr.p) << '\t' << v.entity_name(tr.o);
        if (with_labels) out << '\t' << (tr.value ? 1 : 0);
        out << '\n';
    }
}

inline void save_vocabulary(const std::string& path, const Vocabulary& vocab) {
    nlohmann::json j;
    j["entities"] = vocab.entities();
    j["predicates"] = vocab.predicates();
    j["timestamps"] = vocab.timestamps();
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << j.dump(2) << '\n';
}

inline VocabularyPtr load_vocabulary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    auto vocab = std::make_shared<Vocabulary>();
    for (const auto& n : j.at("entities")) vocab->add_entity(n.get<std::string>());
    for (const auto& n : j.at("predicates")) vocab->add_predicate(n.get<std::string>());
    for (const auto& n : j.at("timestamps")) vocab->add_timestamp(n.get<std::string>());
    return vocab;
}

}  // namespace ekge
