// ekge command-line front end: dataset preparation, training, ranking
// evaluation, episodic-to-semantic projection, synthetic data, and
// parameter accounting. All numeric work happens in the library; the CLI
// only wires files to library calls and reports results.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include <ekge/ekge.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t env_seed_fallback() {
    if (const char* s = std::getenv("EKGE_SEED")) {
        try {
            return std::stoull(s);
        } catch (...) {
            throw std::invalid_argument("EKGE_SEED must be an unsigned integer");
        }
    }
    return 0;
}

std::uint64_t file_fingerprint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ekge::DataError("cannot open " + path);
    std::uint64_t h = 1469598103934665603ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        h = ekge::fnv1a(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
    }
    return h;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ekge::DataError("cannot write " + path);
    out << j.dump(2) << '\n';
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

ekge::TimestampFormat parse_timestamp_format(const std::string& name) {
    if (name == "auto") return ekge::TimestampFormat::auto_detect;
    if (name == "iso") return ekge::TimestampFormat::iso8601;
    if (name == "mdy") return ekge::TimestampFormat::mdy;
    if (name == "int") return ekge::TimestampFormat::integer;
    throw std::invalid_argument("timestamp format must be auto|iso|mdy|int");
}

json metrics_to_json(const ekge::Metrics& metrics) {
    json slots = json::object();
    for (const auto& [slot, m] : metrics) {
        slots[ekge::eval_slot_name(slot)] = {
            {"mrr", m.mrr}, {"hits1", m.hits1}, {"hits3", m.hits3}, {"hits10", m.hits10}, {"count", m.count}};
    }
    return slots;
}

void print_metrics_table(std::ostream& out, const std::string& mode, const ekge::Metrics& metrics) {
    out << mode << " results\n";
    out << "  slot        MRR     @1%     @3%    @10%       n\n";
    char line[128];
    for (const auto& [slot, m] : metrics) {
        std::snprintf(line, sizeof line, "  %-9s %.3f  %6.2f  %6.2f  %6.2f  %6zu\n", ekge::eval_slot_name(slot),
                      m.mrr, 100 * m.hits1, 100 * m.hits3, 100 * m.hits10, m.count);
        out << line;
    }
}

struct PreparedData {
    ekge::VocabularyPtr vocab;
    ekge::EpisodicDataset train, valid, test;
};

PreparedData load_prepared(const std::string& dir) {
    PreparedData d;
    d.vocab = ekge::load_vocabulary(dir + "/vocab.json");
    d.train = ekge::load_quadruples(dir + "/train.tsv", d.vocab);
    d.valid = ekge::load_quadruples(dir + "/valid.tsv", d.vocab);
    d.test = ekge::load_quadruples(dir + "/test.tsv", d.vocab);
    return d;
}

// ---------------------------------------------------------------- prepare

struct PrepareOptions {
    std::string input, out_dir;
    std::string split_spec = "0.8,0.1,0.1";
    std::string timestamp_format = "auto";
    std::uint64_t seed = 0;
    int min_count = 0;
    int rare_threshold = 0;  // 0 = skip
    bool semantic = false;
    bool start_end = false;
};

int cmd_prepare(const PrepareOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    auto fractions_raw = split_csv(opt.split_spec);
    if (fractions_raw.size() != 3) throw std::invalid_argument("--split needs three comma-separated fractions");
    std::array<double, 3> fractions{std::stod(fractions_raw[0]), std::stod(fractions_raw[1]),
                                    std::stod(fractions_raw[2])};

    auto ds = ekge::load_quadruples(opt.input, parse_timestamp_format(opt.timestamp_format));
    auto splits = ekge::split_dataset(ds, fractions, opt.seed, opt.min_count);

    fs::create_directories(opt.out_dir);
    const std::string dir = opt.out_dir;
    ekge::save_vocabulary(dir + "/vocab.json", *ds.vocab);
    ekge::save_quadruples(dir + "/train.tsv", splits.train);
    ekge::save_quadruples(dir + "/valid.tsv", splits.valid);
    ekge::save_quadruples(dir + "/test.tsv", splits.test);

    // materialized filter: the known-true union across splits, sorted
    {
        ekge::EpisodicDataset all{ds.vocab, {}};
        for (const auto* part : {&splits.train, &splits.valid, &splits.test}) {
            for (const auto& q : part->quadruples) {
                if (q.value) all.quadruples.push_back(q);
            }
        }
        std::sort(all.quadruples.begin(), all.quadruples.end());
        all.quadruples.erase(std::unique(all.quadruples.begin(), all.quadruples.end()), all.quadruples.end());
        ekge::save_quadruples(dir + "/filter.tsv", all);
    }

    json outputs = json::array({"vocab.json", "train.tsv", "valid.tsv", "test.tsv", "filter.tsv"});
    json sizes = {{"input", ds.size()},
                  {"train", splits.train.size()},
                  {"valid", splits.valid.size()},
                  {"test", splits.test.size()}};

    if (opt.semantic) {
        auto sem = ekge::derive_semantic(ds);
        ekge::SemanticDataset genuine{sem.vocab, {}}, ruled_out{sem.vocab, {}};
        for (const auto& tr : sem.triples) {
            auto& dst = tr.value ? genuine : ruled_out;
            dst.triples.push_back({tr.s, tr.p, tr.o, true});
        }
        ekge::save_triples(dir + "/semantic.tsv", sem, /*with_labels=*/true);
        ekge::save_triples(dir + "/semantic_genuine.tsv", genuine, /*with_labels=*/false);
        ekge::save_triples(dir + "/semantic_false.tsv", ruled_out, /*with_labels=*/false);
        outputs.insert(outputs.end(), {"semantic.tsv", "semantic_genuine.tsv", "semantic_false.tsv"});
        sizes["semantic_genuine"] = genuine.size();
        sizes["semantic_false"] = ruled_out.size();
    }
    if (opt.start_end) {
        auto [start, end] = ekge::build_start_end(ds);
        ekge::save_quadruples(dir + "/start.tsv", start);
        ekge::save_quadruples(dir + "/end.tsv", end);
        outputs.insert(outputs.end(), {"start.tsv", "end.tsv"});
        sizes["start"] = start.size();
        sizes["end"] = end.size();
    }
    if (opt.rare_threshold > 0) {
        auto rare = ekge::filter_rare(ds, opt.rare_threshold);
        ekge::save_quadruples(dir + "/rare.tsv", rare);
        outputs.push_back("rare.tsv");
        sizes["rare"] = rare.size();
    }

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json manifest = {{"command", "prepare"},
                     {"seed", opt.seed},
                     {"config",
                      {{"input", opt.input},
                       {"split", opt.split_spec},
                       {"min_count", opt.min_count},
                       {"rare_threshold", opt.rare_threshold},
                       {"semantic", opt.semantic},
                       {"start_end", opt.start_end},
                       {"timestamp_format", opt.timestamp_format}}},
                     {"inputs", {{opt.input, hex64(file_fingerprint(opt.input))}}},
                     {"outputs", outputs},
                     {"sizes", sizes},
                     {"vocab_hash", hex64(ds.vocab->hash())},
                     {"wall_seconds", secs}};
    write_json(dir + "/manifest.json", manifest);
    std::cout << "prepared " << ds.size() << " quadruples into " << dir << " (train/valid/test = "
              << splits.train.size() << "/" << splits.valid.size() << "/" << splits.test.size() << ")\n";
    return 0;
}

// ------------------------------------------------------------------ train

ekge::TrainConfig train_config_from_json(const json& cfg) {
    ekge::TrainConfig tc;
    if (cfg.contains("loss")) {
        const std::string loss = cfg["loss"].get<std::string>();
        if (loss == "logistic") tc.loss = ekge::LossKind::logistic;
        else if (loss == "margin") tc.loss = ekge::LossKind::margin;
        else throw std::invalid_argument("loss must be logistic|margin");
    }
    tc.margin = cfg.value("margin", tc.margin);
    tc.apply_sigmoid = cfg.value("apply_sigmoid", tc.apply_sigmoid);
    tc.l2_weight = cfg.value("l2", tc.l2_weight);
    tc.learning_rate = cfg.value("lr", tc.learning_rate);
    tc.batch_size = cfg.value("batch_size", tc.batch_size);
    tc.max_epochs = cfg.value("max_epochs", tc.max_epochs);
    tc.eval_every = cfg.value("eval_every", tc.eval_every);
    tc.patience = cfg.value("patience", tc.patience);
    tc.seed = cfg.value("seed", env_seed_fallback());
    if (cfg.contains("negatives")) {
        const auto& n = cfg["negatives"];
        if (n.contains("slots")) {
            tc.negatives.slots.clear();
            for (const auto& s : n["slots"]) tc.negatives.slots.push_back(ekge::parse_slot(s.get<std::string>()));
        }
        tc.negatives.per_slot = n.value("per_slot", tc.negatives.per_slot);
    }
    if (cfg.contains("eval_slots")) {
        tc.eval_slots.clear();
        for (const auto& s : cfg["eval_slots"]) tc.eval_slots.push_back(ekge::parse_eval_slot(s.get<std::string>()));
    }
    return tc;
}

void write_report_csv(const std::string& path, const ekge::TrainReport& report) {
    std::ofstream out(path);
    if (!out) throw ekge::DataError("cannot write " + path);
    out << "epoch,loss,valid_mrr\n";
    char line[96];
    for (const auto& pt : report.history) {
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", pt.epoch, pt.train_loss, pt.valid_mrr);
        out << line;
    }
}

struct TrainCliOverrides {
    std::string model, out_dir, data_dir;
    int rank = 0, rank_t = 0, epochs = -1;
    double lr = 0.0;
    std::int64_t seed = -1;
    unsigned threads = 0;
};

int cmd_train(const std::string& config_path, const TrainCliOverrides& ov) {
    std::ifstream in(config_path);
    if (!in) throw ekge::DataError("cannot open " + config_path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw ekge::DataError(config_path + ": " + e.what());
    }

    // flags win over the config file
    if (!ov.model.empty()) cfg["model"] = ov.model;
    if (!ov.data_dir.empty()) cfg["data_dir"] = ov.data_dir;
    if (!ov.out_dir.empty()) cfg["out_dir"] = ov.out_dir;
    if (ov.rank > 0) cfg["rank"] = ov.rank;
    if (ov.rank_t > 0) cfg["rank_t"] = ov.rank_t;
    if (ov.epochs >= 0) cfg["max_epochs"] = ov.epochs;
    if (ov.lr > 0) cfg["lr"] = ov.lr;
    if (ov.seed >= 0) cfg["seed"] = static_cast<std::uint64_t>(ov.seed);

    const std::string model = cfg.at("model").get<std::string>();
    auto [kind, variant] = ekge::parse_model_name(model);
    const int rank_dim = cfg.at("rank").get<int>();
    const ekge::Rank rank(rank_dim, cfg.value("rank_t", rank_dim));
    const std::string data_dir = cfg.at("data_dir").get<std::string>();
    const std::string out_dir = cfg.value("out_dir", std::string("."));
    const bool projection = cfg.value("projection", false);

    ekge::TrainConfig tc = train_config_from_json(cfg);
    tc.threads = ov.threads;

    fs::create_directories(out_dir);
    auto vocab = ekge::load_vocabulary(data_dir + "/vocab.json");

    json inputs = {{data_dir + "/vocab.json", hex64(file_fingerprint(data_dir + "/vocab.json"))}};
    json outputs = json::array();
    const auto t0 = std::chrono::steady_clock::now();
    int epochs_run = 0;

    if (projection) {
        if (variant != ekge::Variant::episodic) throw std::invalid_argument("projection training needs an episodic model");
        const std::string start_file = data_dir + "/" + cfg.value("start_file", std::string("start.tsv"));
        const std::string end_file = data_dir + "/" + cfg.value("end_file", std::string("end.tsv"));
        auto start_ds = ekge::load_quadruples(start_file, vocab);
        auto end_ds = ekge::load_quadruples(end_file, vocab);
        inputs[start_file] = hex64(file_fingerprint(start_file));
        inputs[end_file] = hex64(file_fingerprint(end_file));

        auto result = ekge::train_projection(kind, start_ds, end_ds, rank, tc);
        ekge::save_checkpoint(out_dir + "/checkpoint.bin", result.params);
        write_report_csv(out_dir + "/report_start.csv", result.start_stage);
        write_report_csv(out_dir + "/report_end.csv", result.end_stage);
        outputs.insert(outputs.end(), {"checkpoint.bin", "report_start.csv", "report_end.csv"});
        epochs_run = result.start_stage.stopped_epoch + result.end_stage.stopped_epoch;
        std::cout << "stage 1 best filtered MRR " << result.start_stage.best_mrr << " @ epoch "
                  << result.start_stage.best_epoch << "; stage 2 best " << result.end_stage.best_mrr
                  << " @ epoch " << result.end_stage.best_epoch << "\n";
    } else {
        const bool semantic = variant == ekge::Variant::semantic;
        const std::string train_file =
            data_dir + "/" + cfg.value("train_file", std::string(semantic ? "semantic_genuine.tsv" : "train.tsv"));
        const std::string valid_file =
            data_dir + "/" + cfg.value("valid_file", std::string(semantic ? "semantic_genuine.tsv" : "valid.tsv"));
        ekge::TrainResult result;
        if (semantic) {
            auto train_ds = ekge::load_triples(train_file, vocab);
            auto valid_ds = ekge::load_triples(valid_file, vocab);
            result = ekge::train(kind, train_ds, valid_ds, rank, tc);
        } else {
            auto train_ds = ekge::load_quadruples(train_file, vocab);
            auto valid_ds = ekge::load_quadruples(valid_file, vocab);
            result = ekge::train(kind, variant, train_ds, valid_ds, rank, tc);
        }
        inputs[train_file] = hex64(file_fingerprint(train_file));
        inputs[valid_file] = hex64(file_fingerprint(valid_file));
        ekge::save_checkpoint(out_dir + "/checkpoint.bin", result.params);
        write_report_csv(out_dir + "/report.csv", result.report);
        outputs.insert(outputs.end(), {"checkpoint.bin", "report.csv"});
        epochs_run = result.report.stopped_epoch;
        std::cout << "best filtered MRR " << result.report.best_mrr << " @ epoch " << result.report.best_epoch
                  << " (" << result.report.stopped_epoch << " epochs run)\n";
    }

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json manifest = {{"command", "train"},
                     {"seed", tc.seed},
                     {"config", cfg},
                     {"inputs", inputs},
                     {"outputs", outputs},
                     {"vocab_hash", hex64(vocab->hash())},
                     {"wall_seconds", secs},
                     {"seconds_per_epoch", epochs_run > 0 ? secs / epochs_run : 0.0}};
    write_json(out_dir + "/manifest.json", manifest);
    return 0;
}

// ------------------------------------------------------------------- eval

struct EvalOptions {
    std::string checkpoint, data_dir, out_path;
    std::string slots = "entity,predicate,timestamp";
    std::string mode = "filtered";
    std::string split = "test";
    std::int64_t max_facts = -1;
    unsigned threads = 0;
};

int cmd_eval(const EvalOptions& opt) {
    auto params = ekge::load_checkpoint(opt.checkpoint);
    auto data = load_prepared(opt.data_dir);
    if (params.vocab_hash != data.vocab->hash()) {
        throw ekge::DataError("checkpoint was trained on a different vocabulary than " + opt.data_dir);
    }

    ekge::FilterIndex filter;
    filter.add(data.train);
    filter.add(data.valid);
    filter.add(data.test);

    const ekge::EpisodicDataset* target = &data.test;
    if (opt.split == "train") target = &data.train;
    else if (opt.split == "valid") target = &data.valid;
    else if (opt.split != "test") throw std::invalid_argument("--split must be train|valid|test");

    ekge::EpisodicDataset truncated;
    if (opt.max_facts >= 0 && static_cast<std::size_t>(opt.max_facts) < target->quadruples.size()) {
        truncated.vocab = target->vocab;
        truncated.quadruples.assign(target->quadruples.begin(), target->quadruples.begin() + opt.max_facts);
        target = &truncated;
    }

    std::vector<ekge::EvalSlot> slots;
    for (const auto& s : split_csv(opt.slots)) slots.push_back(ekge::parse_eval_slot(s));
    if (params.variant == ekge::Variant::semantic) {
        for (ekge::EvalSlot s : slots) {
            if (s == ekge::EvalSlot::timestamp) throw std::invalid_argument("semantic models have no timestamp slot");
        }
    }

    json result = {{"schema_version", 1},
                   {"model", ekge::model_name(params.kind, params.variant)},
                   {"checkpoint_hash", hex64(file_fingerprint(opt.checkpoint))},
                   {"split", opt.split},
                   {"facts", target->size()}};
    for (const std::string& mode_name : opt.mode == "both" ? std::vector<std::string>{"filtered", "raw"}
                                                           : std::vector<std::string>{opt.mode}) {
        const ekge::RankingMode mode =
            mode_name == "filtered" ? ekge::RankingMode::filtered : ekge::RankingMode::raw;
        if (mode_name != "filtered" && mode_name != "raw") throw std::invalid_argument("--mode must be filtered|raw|both");
        auto metrics = ekge::evaluate(params, *target, slots, filter, mode, opt.threads);
        result["metrics"][mode_name] = metrics_to_json(metrics);
        print_metrics_table(std::cout, mode_name, metrics);
    }

    if (!opt.out_path.empty()) write_json(opt.out_path, result);
    return 0;
}

// ---------------------------------------------------------------- project

struct ProjectOptions {
    std::string checkpoint, genuine, false_set, vocab, out_path;
    std::string baseline_checkpoint;  // optional separately trained semantic model
    std::string curve_prefix;         // write <prefix><mode>.csv precision-recall sweeps
    std::string mode = "both";
    double recall_threshold = 0.5;
    unsigned threads = 0;
};

void write_pr_curve_csv(const std::string& path, const ekge::PRCurve& curve) {
    std::ofstream out(path);
    if (!out) throw ekge::DataError("cannot write " + path);
    out << "score,precision,recall\n";
    char line[96];
    for (const auto& pt : curve.points) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", pt.threshold, pt.precision, pt.recall);
        out << line;
    }
}

int cmd_project(const ProjectOptions& opt) {
    auto params = ekge::load_checkpoint(opt.checkpoint);
    auto vocab = ekge::load_vocabulary(opt.vocab);
    if (params.vocab_hash != vocab->hash()) {
        throw ekge::DataError("checkpoint was trained on a different vocabulary than " + opt.vocab);
    }
    auto genuine = ekge::load_triples(opt.genuine, vocab);
    auto false_set = ekge::load_triples(opt.false_set, vocab);

    ekge::FilterIndex filter;
    filter.add(genuine);

    std::vector<ekge::ProjectionMode> modes;
    if (opt.mode == "start") modes = {ekge::ProjectionMode::start};
    else if (opt.mode == "start-end") modes = {ekge::ProjectionMode::start_end};
    else if (opt.mode == "both") modes = {ekge::ProjectionMode::start, ekge::ProjectionMode::start_end};
    else throw std::invalid_argument("--mode must be start|start-end|both");

    json result = {{"schema_version", 1},
                   {"model", ekge::model_name(params.kind, params.variant)},
                   {"checkpoint", opt.checkpoint},
                   {"genuine", opt.genuine},
                   {"false", opt.false_set}};

    std::cout << "projection: " << ekge::kind_name(params.kind) << ", Hits@10 %\n";
    std::cout << "  mode        genuine(filt)  genuine(raw)  false(filt)  false(raw)   AUPRC  recall\n";
    for (ekge::ProjectionMode mode : modes) {
        auto scorer = ekge::marginalize(params, mode);
        auto ev = ekge::evaluate_projection(scorer, genuine, false_set, filter, opt.threads,
                                            opt.recall_threshold);
        if (!opt.curve_prefix.empty()) {
            std::vector<double> scores;
            std::vector<bool> labels;
            for (const auto& tr : genuine.triples) {
                scores.push_back(ekge::project_score(scorer, tr));
                labels.push_back(true);
            }
            for (const auto& tr : false_set.triples) {
                scores.push_back(ekge::project_score(scorer, tr));
                labels.push_back(false);
            }
            const std::string suffix = mode == ekge::ProjectionMode::start ? "start" : "start_end";
            write_pr_curve_csv(opt.curve_prefix + suffix + ".csv", ekge::pr_curve(scores, labels));
        }
        result["modes"][ekge::projection_mode_name(mode)] = {
            {"genuine", {{"hits10_filtered", ev.genuine.hits10_filtered}, {"hits10_raw", ev.genuine.hits10_raw}}},
            {"false", {{"hits10_filtered", ev.false_set.hits10_filtered}, {"hits10_raw", ev.false_set.hits10_raw}}},
            {"auprc", ev.auprc},
            {"recall", ev.recall}};
        char line[160];
        std::snprintf(line, sizeof line, "  %-10s %13.1f %13.1f %12.1f %11.1f  %6.3f  %6.3f\n",
                      ekge::projection_mode_name(mode), 100 * ev.genuine.hits10_filtered,
                      100 * ev.genuine.hits10_raw, 100 * ev.false_set.hits10_filtered,
                      100 * ev.false_set.hits10_raw, ev.auprc, ev.recall);
        std::cout << line;
    }

    if (!opt.baseline_checkpoint.empty()) {
        auto baseline = ekge::load_checkpoint(opt.baseline_checkpoint);
        if (baseline.variant != ekge::Variant::semantic) {
            throw ekge::DataError("--baseline must be a semantic checkpoint");
        }
        if (baseline.vocab_hash != vocab->hash()) {
            throw ekge::DataError("baseline checkpoint was trained on a different vocabulary");
        }
        auto pinned = ekge::as_pinned_quadruples(genuine);
        auto filtered = ekge::evaluate(baseline, pinned, {ekge::EvalSlot::object}, filter,
                                       ekge::RankingMode::filtered, opt.threads);
        auto raw = ekge::evaluate(baseline, pinned, {ekge::EvalSlot::object}, filter, ekge::RankingMode::raw,
                                  opt.threads);
        const double hf = filtered.at(ekge::EvalSlot::object).hits10;
        const double hr = raw.at(ekge::EvalSlot::object).hits10;
        result["semantic_baseline"] = {{"model", ekge::model_name(baseline.kind, baseline.variant)},
                                       {"hits10_filtered", hf},
                                       {"hits10_raw", hr}};
        char line[160];
        std::snprintf(line, sizeof line, "  %-10s %13.1f %13.1f  (separately trained %s)\n", "semantic",
                      100 * hf, 100 * hr, ekge::kind_name(baseline.kind).c_str());
        std::cout << line;
    }

    if (!opt.out_path.empty()) write_json(opt.out_path, result);
    return 0;
}

// ------------------------------------------------------------ synth/count

struct SynthOptions {
    ekge::SynthSpec spec;
    std::string out_path;
};

int cmd_synth(const SynthOptions& opt) {
    auto result = ekge::synth_generate(opt.spec);
    ekge::save_quadruples(opt.out_path, result.dataset);
    std::size_t open_spans = 0;
    for (const auto& s : result.spans) open_spans += s.open;
    std::cout << "wrote " << result.dataset.size() << " quadruples (" << result.spans.size() << " spans, "
              << open_spans << " open) to " << opt.out_path << "\n";
    return 0;
}

struct ParamCountOptions {
    std::string model;
    ekge::Index ne = 0, np = 0, nt = 0;
    int rank = 0, rank_t = 0;
};

int cmd_paramcount(const ParamCountOptions& opt) {
    auto [kind, variant] = ekge::parse_model_name(opt.model);
    const ekge::Rank rank(opt.rank, opt.rank_t > 0 ? opt.rank_t : opt.rank);
    std::cout << ekge::param_count(kind, variant, opt.ne, opt.np, opt.nt, rank) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"episodic knowledge-graph embeddings"};
    app.require_subcommand(1);

    PrepareOptions prep;
    auto* prepare = app.add_subcommand("prepare", "split a quadruple TSV and derive auxiliary tensors");
    prepare->add_option("--input", prep.input, "quadruple TSV")->required();
    prepare->add_option("--out", prep.out_dir, "output directory")->required();
    prepare->add_option("--split", prep.split_spec, "train,valid,test fractions");
    prepare->add_option("--seed", prep.seed, "split seed (default: EKGE_SEED or 0)");
    prepare->add_option("--min-count", prep.min_count, "drop facts whose entities occur fewer times");
    prepare->add_option("--rare-threshold", prep.rare_threshold, "also write rare.tsv with events occurring < N times");
    prepare->add_flag("--semantic", prep.semantic, "also derive semantic genuine/false sets");
    prepare->add_flag("--start-end", prep.start_end, "also write start/end tensors");
    prepare->add_option("--timestamp-format", prep.timestamp_format, "auto|iso|mdy|int");

    std::string train_config;
    TrainCliOverrides train_ov;
    auto* train = app.add_subcommand("train", "train a model from a JSON config");
    train->add_option("--config", train_config, "JSON config file")->required();
    train->add_option("--model", train_ov.model, "override: model name, e.g. cont-epi");
    train->add_option("--data", train_ov.data_dir, "override: prepared data directory");
    train->add_option("--out", train_ov.out_dir, "override: output directory");
    train->add_option("--rank", train_ov.rank, "override: embedding dimension");
    train->add_option("--rank-t", train_ov.rank_t, "override: time dimension");
    train->add_option("--epochs", train_ov.epochs, "override: max epochs");
    train->add_option("--lr", train_ov.lr, "override: learning rate");
    train->add_option("--seed", train_ov.seed, "override: seed");
    train->add_option("--threads", train_ov.threads, "worker threads (0 = all cores)");

    EvalOptions eval_opt;
    auto* eval = app.add_subcommand("eval", "ranking metrics for a checkpoint");
    eval->add_option("--checkpoint", eval_opt.checkpoint, "checkpoint file")->required();
    eval->add_option("--data", eval_opt.data_dir, "prepared data directory")->required();
    eval->add_option("--split", eval_opt.split, "train|valid|test");
    eval->add_option("--slots", eval_opt.slots, "comma list: entity,subject,object,predicate,timestamp");
    eval->add_option("--mode", eval_opt.mode, "filtered|raw|both");
    eval->add_option("--out", eval_opt.out_path, "metrics JSON output path");
    eval->add_option("--max-facts", eval_opt.max_facts, "evaluate only the first N facts");
    eval->add_option("--threads", eval_opt.threads, "worker threads (0 = all cores)");

    ProjectOptions proj;
    auto* project = app.add_subcommand("project", "episodic-to-semantic projection report");
    project->add_option("--checkpoint", proj.checkpoint, "two-stage checkpoint")->required();
    project->add_option("--vocab", proj.vocab, "vocabulary JSON")->required();
    project->add_option("--genuine", proj.genuine, "genuine semantic triples TSV")->required();
    project->add_option("--false", proj.false_set, "false semantic triples TSV")->required();
    project->add_option("--baseline", proj.baseline_checkpoint, "semantic baseline checkpoint");
    project->add_option("--curve-out", proj.curve_prefix, "prefix for precision-recall curve CSVs");
    project->add_option("--mode", proj.mode, "start|start-end|both");
    project->add_option("--recall-threshold", proj.recall_threshold, "score threshold for recall");
    project->add_option("--out", proj.out_path, "report JSON output path");
    project->add_option("--threads", proj.threads, "worker threads (0 = all cores)");

    SynthOptions synth_opt;
    auto* synth = app.add_subcommand("synth", "generate a synthetic episodic dataset");
    synth->add_option("--entities", synth_opt.spec.num_entities, "entity count")->required();
    synth->add_option("--predicates", synth_opt.spec.num_predicates, "predicate count")->required();
    synth->add_option("--timestamps", synth_opt.spec.num_timestamps, "timestamp count")->required();
    synth->add_option("--spans", synth_opt.spec.num_spans, "number of event spans")->required();
    synth->add_option("--min-len", synth_opt.spec.min_span_length, "minimum span length");
    synth->add_option("--max-len", synth_opt.spec.max_span_length, "maximum span length");
    synth->add_option("--seed", synth_opt.spec.seed, "seed (default: EKGE_SEED or 0)");
    synth->add_option("--out", synth_opt.out_path, "output TSV")->required();

    ParamCountOptions pc;
    auto* paramcount = app.add_subcommand("paramcount", "closed-form parameter total for a model");
    paramcount->add_option("--model", pc.model, "model name, e.g. distmult-epi")->required();
    paramcount->add_option("--ne", pc.ne, "entity count")->required();
    paramcount->add_option("--np", pc.np, "predicate count")->required();
    paramcount->add_option("--nt", pc.nt, "timestamp count")->required();
    paramcount->add_option("--rank", pc.rank, "embedding dimension")->required();
    paramcount->add_option("--rank-t", pc.rank_t, "time dimension (default: rank)");

    try {
        prep.seed = env_seed_fallback();
        synth_opt.spec.seed = env_seed_fallback();
        app.parse(argc, argv);
        if (prepare->parsed()) return cmd_prepare(prep);
        if (train->parsed()) return cmd_train(train_config, train_ov);
        if (eval->parsed()) return cmd_eval(eval_opt);
        if (project->parsed()) return cmd_project(proj);
        if (synth->parsed()) return cmd_synth(synth_opt);
        if (paramcount->parsed()) return cmd_paramcount(pc);
    } catch (const CLI::ParseError& e) {
        // normalize CLI11's error codes onto the documented usage-error code
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const ekge::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const ekge::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
