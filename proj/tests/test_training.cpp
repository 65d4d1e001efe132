#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace ekge;

namespace {

TrainConfig memorization_config(std::uint64_t seed) {
    TrainConfig cfg;
    cfg.loss = LossKind::logistic;
    cfg.learning_rate = 0.02;
    cfg.batch_size = 64;
    cfg.max_epochs = 500;
    cfg.eval_every = 25;
    cfg.patience = 4;
    cfg.negatives.slots = {FactSlot::subject, FactSlot::object, FactSlot::timestamp};
    cfg.negatives.per_slot = 1;
    cfg.eval_slots = {EvalSlot::timestamp, EvalSlot::entity};
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("cont memorizes a tiny dataset") {
    auto synth = synth_generate({.num_entities = 2, .num_predicates = 1, .num_timestamps = 4,
                                 .num_spans = 3, .min_span_length = 1, .max_span_length = 2, .seed = 30});
    auto cfg = memorization_config(1);
    auto result = train(ModelKind::cont, Variant::episodic, synth.dataset, synth.dataset, Rank(4), cfg);
    CHECK(result.report.best_mrr >= 0.99);
    CHECK(result.report.stopped_epoch <= 500);
}

TEST_CASE("zero epochs returns the initialization untouched") {
    auto synth = synth_generate({.num_entities = 4, .num_predicates = 2, .num_timestamps = 5,
                                 .num_spans = 6, .min_span_length = 1, .max_span_length = 2, .seed = 31});
    TrainConfig cfg = memorization_config(2);
    cfg.max_epochs = 0;
    auto result = train(ModelKind::cont, Variant::episodic, synth.dataset, synth.dataset, Rank(3), cfg);
    CHECK(result.report.history.empty());
    CHECK(result.report.stopped_epoch == 0);
    auto fresh = init_params(ModelKind::cont, Variant::episodic, *synth.dataset.vocab, Rank(3), cfg.seed);
    for (const auto& [slot, t] : fresh.tables) CHECK(result.params.table(slot).values == t.values);
}

TEST_CASE("training is deterministic per seed") {
    auto synth = synth_generate({.num_entities = 5, .num_predicates = 2, .num_timestamps = 5,
                                 .num_spans = 8, .min_span_length = 1, .max_span_length = 2, .seed = 32});
    TrainConfig cfg = memorization_config(5);
    cfg.max_epochs = 60;
    auto a = train(ModelKind::dist_mult, Variant::episodic, synth.dataset, synth.dataset, Rank(4), cfg);
    auto b = train(ModelKind::dist_mult, Variant::episodic, synth.dataset, synth.dataset, Rank(4), cfg);
    REQUIRE(a.report.history.size() == b.report.history.size());
    for (std::size_t i = 0; i < a.report.history.size(); ++i) {
        CHECK(a.report.history[i].epoch == b.report.history[i].epoch);
        CHECK(a.report.history[i].train_loss == b.report.history[i].train_loss);
        CHECK(a.report.history[i].valid_mrr == b.report.history[i].valid_mrr);
    }
    for (const auto& [slot, t] : a.params.tables) CHECK(b.params.table(slot).values == t.values);
}

TEST_CASE("thread count does not change the trained model") {
    auto synth = synth_generate({.num_entities = 5, .num_predicates = 2, .num_timestamps = 5,
                                 .num_spans = 8, .min_span_length = 1, .max_span_length = 2, .seed = 33});
    TrainConfig cfg = memorization_config(6);
    cfg.max_epochs = 40;
    auto a = train(ModelKind::cont, Variant::episodic, synth.dataset, synth.dataset, Rank(3), cfg);
    cfg.threads = 4;
    auto b = train(ModelKind::cont, Variant::episodic, synth.dataset, synth.dataset, Rank(3), cfg);
    for (const auto& [slot, t] : a.params.tables) CHECK(b.params.table(slot).values == t.values);
}

TEST_CASE("one step from init reduces the batch loss almost always") {
    auto vocab = oracle::make_vocab(6, 2, 4);
    auto vocab_ptr = std::make_shared<Vocabulary>(vocab);
    Rng rng = seeded_rng(70);
    for (auto [kind, variant] : oracle::all_model_variants()) {
        int improved = 0;
        const int trials = 100;
        for (int trial = 0; trial < trials; ++trial) {
            ModelParams P = init_params(kind, variant, vocab, Rank(4), 1000 + trial);
            // fixed labeled batch: 4 positives, 8 corrupted negatives
            std::vector<Quadruple> batch;
            FilterIndex filter;
            std::vector<Quadruple> positives;
            for (int i = 0; i < 4; ++i) {
                Quadruple q = oracle::random_quadruple(vocab, rng);
                if (variant == Variant::semantic) q.t = 0;
                positives.push_back(q);
                filter.add(q);
            }
            for (const auto& q : positives) {
                batch.push_back(q);
                auto negs = sample_negatives(q, vocab, {FactSlot::subject, FactSlot::object}, 1, filter, rng);
                batch.insert(batch.end(), negs.begin(), negs.end());
            }
            auto batch_loss = [&](const ModelParams& params) {
                std::vector<double> scores;
                std::vector<int> labels;
                for (const auto& q : batch) {
                    scores.push_back(score_fact(params, q));
                    labels.push_back(q.value ? 1 : -1);
                }
                return logistic_loss(scores, labels);
            };
            const double before = batch_loss(P);
            SparseGrad grad;
            for (const auto& q : batch) {
                accumulate_fact_gradient(P, q, logistic_loss_dtheta(score_fact(P, q), q.value ? 1 : -1), grad);
            }
            AdamState state(P);
            adam_step(state, P, grad, 1e-3);
            improved += batch_loss(P) < before;
        }
        CAPTURE(model_name(kind, variant));
        CHECK(improved >= 95);
    }
}

TEST_CASE("divergence raises a numeric error") {
    auto synth = synth_generate({.num_entities = 4, .num_predicates = 1, .num_timestamps = 4,
                                 .num_spans = 5, .min_span_length = 1, .max_span_length = 2, .seed = 34});
    TrainConfig cfg = memorization_config(7);
    cfg.learning_rate = 1e80;  // one step throws every table far out of range
    cfg.max_epochs = 5;
    CHECK_THROWS_AS(train(ModelKind::cont, Variant::episodic, synth.dataset, synth.dataset, Rank(3), cfg),
                    NumericError);
}

TEST_CASE("vocabulary mismatch between train and valid is rejected") {
    auto a = synth_generate({.num_entities = 4, .num_predicates = 1, .num_timestamps = 4,
                             .num_spans = 4, .min_span_length = 1, .max_span_length = 1, .seed = 35});
    auto b = synth_generate({.num_entities = 5, .num_predicates = 1, .num_timestamps = 4,
                             .num_spans = 4, .min_span_length = 1, .max_span_length = 1, .seed = 35});
    TrainConfig cfg = memorization_config(8);
    cfg.max_epochs = 1;
    CHECK_THROWS_AS(train(ModelKind::cont, Variant::episodic, a.dataset, b.dataset, Rank(3), cfg), DataError);
}

TEST_CASE("weight decay shrinks rows the gradients never touch") {
    // facts live at timestamps 0 and 1 only; without timestamp corruption
    // rows 2..4 of the time table receive nothing but the catch-up decay
    EpisodicDataset ds;
    ds.vocab = std::make_shared<Vocabulary>(oracle::make_vocab(6, 2, 5));
    ds.quadruples = {{0, 0, 0, 1, true}, {0, 2, 1, 3, true}, {1, 1, 0, 4, true}, {1, 5, 1, 0, true}};

    TrainConfig cfg = memorization_config(9);
    cfg.max_epochs = 10;
    cfg.eval_every = 10;
    cfg.patience = 5;
    cfg.l2_weight = 0.05;
    cfg.batch_size = 64;  // one batch per epoch
    cfg.negatives.slots = {FactSlot::object};
    auto result = train(ModelKind::dist_mult, Variant::episodic, ds, ds, Rank(4), cfg);

    auto fresh = init_params(ModelKind::dist_mult, Variant::episodic, *ds.vocab, Rank(4), cfg.seed);
    const double factor = std::pow(1.0 - 2.0 * cfg.learning_rate * cfg.l2_weight, 10.0);
    for (Index t : {2, 3, 4}) {
        const auto before = fresh.table(Slot::time_re).row(t);
        const auto after = result.params.table(Slot::time_re).row(t);
        for (std::size_t i = 0; i < before.size(); ++i) {
            REQUIRE_THAT(after[i], Catch::Matchers::WithinAbs(before[i] * factor, 1e-12));
        }
    }
}

TEST_CASE("semantic training memorizes a small triple set") {
    auto vocab_ptr = std::make_shared<Vocabulary>(oracle::make_vocab(5, 2, 1));
    SemanticDataset ds{vocab_ptr, {}};
    Rng rng = seeded_rng(71);
    std::set<std::tuple<Index, Index, Index>> seen;
    while (ds.triples.size() < 8) {
        auto tr = oracle::random_triple(*vocab_ptr, rng);
        if (seen.insert({tr.s, tr.p, tr.o}).second) ds.triples.push_back(tr);
    }
    TrainConfig cfg = memorization_config(10);
    cfg.negatives.slots = {FactSlot::subject, FactSlot::object};
    cfg.eval_slots = {EvalSlot::entity};
    auto result = train(ModelKind::rescal, ds, ds, Rank(4), cfg);
    CHECK(result.report.best_mrr >= 0.9);
}

TEST_CASE("two-stage training freezes everything but the end-time tables") {
    auto synth = synth_generate({.num_entities = 8, .num_predicates = 2, .num_timestamps = 8,
                                 .num_spans = 14, .min_span_length = 2, .max_span_length = 4, .seed = 37});
    auto [start_ds, end_ds] = build_start_end(synth.dataset);
    REQUIRE(!end_ds.quadruples.empty());

    TrainConfig cfg = memorization_config(11);
    cfg.loss = LossKind::margin;
    cfg.apply_sigmoid = false;
    cfg.max_epochs = 120;
    cfg.eval_every = 30;
    cfg.eval_slots = {EvalSlot::timestamp};

    auto stage1_only = train(ModelKind::cont, Variant::episodic, start_ds, start_ds, Rank(4), cfg);
    auto both = train_projection(ModelKind::cont, start_ds, end_ds, Rank(4), cfg);

    // stage 2 must not move anything stage 1 produced
    for (const auto& [slot, t] : stage1_only.params.tables) {
        REQUIRE(both.params.table(slot).values == t.values);
    }
    CHECK(both.params.has(Slot::time_core_end));

    // and the end table must differ from its initialization
    auto init_copy = stage1_only.params;
    add_end_time_tables(init_copy, cfg.seed + 1);
    CHECK(init_copy.table(Slot::time_core_end).values != both.params.table(Slot::time_core_end).values);
}

TEST_CASE("after stage two the end representation recalls end times") {
    auto synth = synth_generate({.num_entities = 10, .num_predicates = 2, .num_timestamps = 8,
                                 .num_spans = 20, .min_span_length = 2, .max_span_length = 4, .seed = 38});
    auto [start_ds, end_ds] = build_start_end(synth.dataset);
    REQUIRE(end_ds.quadruples.size() >= 5);

    TrainConfig cfg = memorization_config(12);
    cfg.loss = LossKind::margin;
    cfg.apply_sigmoid = false;
    cfg.eval_slots = {EvalSlot::timestamp};
    auto result = train_projection(ModelKind::cont, start_ds, end_ds, Rank(8), cfg);

    FilterIndex filter;
    filter.add(end_ds);
    std::size_t in_top3 = 0;
    for (const auto& q : end_ds.quadruples) {
        const int r = rank_slot(result.params, q, FactSlot::timestamp, filter, RankingMode::filtered,
                                TimeSide::end);
        in_top3 += r <= 3;
    }
    CHECK(static_cast<double>(in_top3) >= 0.9 * static_cast<double>(end_ds.quadruples.size()));
}

TEST_CASE("projection training rejects the tree model and mismatched tensors") {
    auto synth = synth_generate({.num_entities = 5, .num_predicates = 1, .num_timestamps = 5,
                                 .num_spans = 6, .min_span_length = 1, .max_span_length = 2, .seed = 39});
    auto [start_ds, end_ds] = build_start_end(synth.dataset);
    TrainConfig cfg = memorization_config(13);
    cfg.max_epochs = 1;
    CHECK_THROWS_AS(train_projection(ModelKind::tree, start_ds, end_ds, Rank(3), cfg), std::invalid_argument);

    auto other = synth_generate({.num_entities = 6, .num_predicates = 1, .num_timestamps = 5,
                                 .num_spans = 6, .min_span_length = 1, .max_span_length = 2, .seed = 39});
    CHECK_THROWS_AS(train_projection(ModelKind::cont, start_ds, other.dataset, Rank(3), cfg), DataError);
}

TEST_CASE("the report history is monotone in epoch") {
    auto synth = synth_generate({.num_entities = 5, .num_predicates = 2, .num_timestamps = 5,
                                 .num_spans = 8, .min_span_length = 1, .max_span_length = 2, .seed = 40});
    TrainConfig cfg = memorization_config(14);
    cfg.max_epochs = 100;
    cfg.eval_every = 20;
    cfg.patience = 10;
    auto result = train(ModelKind::tucker, Variant::episodic, synth.dataset, synth.dataset, Rank(3), cfg);
    REQUIRE(!result.report.history.empty());
    for (std::size_t i = 1; i < result.report.history.size(); ++i) {
        CHECK(result.report.history[i].epoch > result.report.history[i - 1].epoch);
    }
    CHECK(result.report.best_mrr >= result.report.history.front().valid_mrr);
}
