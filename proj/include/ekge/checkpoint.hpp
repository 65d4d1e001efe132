// Self-describing model checkpoints.
//
// Layout (all integers and floats little-endian):
//   bytes 0-7   magic "EKGECKP1"
//   u64         header length H
//   H bytes     UTF-8 JSON: model, variant, rank, counts, vocab hash (hex),
//               and a table directory [{tag, rows, cols, fan_in, fan_out}]
//   payload     for each table in directory order, rows*cols float64
#pragma once

#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "ekge/params.hpp"

namespace ekge {

namespace detail {

constexpr char kCheckpointMagic[8] = {'E', 'K', 'G', 'E', 'C', 'K', 'P', '1'};

inline void put_u64(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, 8);
}

inline std::uint64_t get_u64(std::istream& in) {
    char buf[8];
    in.read(buf, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
    return v;
}

inline void put_f64(std::ostream& out, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    put_u64(out, bits);
}

inline double get_f64(std::istream& in) {
    const std::uint64_t bits = get_u64(in);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace detail

inline void save_checkpoint(const std::string& path, const ModelParams& P) {
    nlohmann::json header;
    header["format_version"] = 1;
    header["model"] = kind_name(P.kind);
    header["variant"] = variant_name(P.variant);
    header["rank"] = P.rank.dim;
    header["rank_t"] = P.rank.dim_t;
    header["entities"] = P.num_entities;
    header["predicates"] = P.num_predicates;
    header["timestamps"] = P.num_timestamps;
    header["vocab_hash"] = detail::hex64(P.vocab_hash);
    nlohmann::json dir = nlohmann::json::array();
    for (const auto& [slot, t] : P.tables) {
        dir.push_back({{"tag", slot_tag(slot)}, {"rows", t.rows}, {"cols", t.cols},
                       {"fan_in", t.fan_in}, {"fan_out", t.fan_out}});
    }
    header["tables"] = dir;
    const std::string hs = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out.write(detail::kCheckpointMagic, 8);
    detail::put_u64(out, hs.size());
    out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    for (const auto& [slot, t] : P.tables) {
        for (double v : t.values) detail::put_f64(out, v);
    }
    if (!out) throw DataError("write failed: " + path);
}

inline ModelParams load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, detail::kCheckpointMagic, 8) != 0) {
        throw DataError(path + ": not a checkpoint file");
    }
    const std::uint64_t hlen = detail::get_u64(in);
    std::string hs(hlen, '\0');
    in.read(hs.data(), static_cast<std::streamsize>(hlen));
    if (!in) throw DataError(path + ": truncated header");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(hs);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": bad header: " + e.what());
    }

    ModelParams P;
    auto [kind, variant] = parse_model_name(header.at("model").get<std::string>() + "-" +
                                            header.at("variant").get<std::string>());
    P.kind = kind;
    P.variant = variant;
    P.rank = Rank(header.at("rank").get<int>(), header.at("rank_t").get<int>());
    P.num_entities = header.at("entities").get<Index>();
    P.num_predicates = header.at("predicates").get<Index>();
    P.num_timestamps = header.at("timestamps").get<Index>();
    P.vocab_hash = std::stoull(header.at("vocab_hash").get<std::string>(), nullptr, 16);

    for (const auto& entry : header.at("tables")) {
        const Slot slot = parse_slot_tag(entry.at("tag").get<std::string>());
        Table t(entry.at("rows").get<std::int64_t>(), entry.at("cols").get<std::int64_t>(),
                entry.at("fan_in").get<std::int64_t>(), entry.at("fan_out").get<std::int64_t>());
        for (double& v : t.values) v = detail::get_f64(in);
        if (!in) throw DataError(path + ": truncated payload in table " + slot_tag(slot));
        P.tables.emplace(slot, std::move(t));
    }
    return P;
}

}  // namespace ekge
