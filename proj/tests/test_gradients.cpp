#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace ekge;

namespace {

double score_any(const ModelParams& P, const Quadruple& q) { return score_fact(P, q); }

// Central finite difference of the score w.r.t. one parameter coordinate.
double fd_partial(ModelParams& P, const Quadruple& q, Slot slot, std::int64_t row, std::size_t col,
                  double step = 1e-5) {
    double& x = P.table(slot).at(row, static_cast<std::int64_t>(col));
    const double saved = x;
    x = saved + step;
    const double hi = score_any(P, q);
    x = saved - step;
    const double lo = score_any(P, q);
    x = saved;
    return (hi - lo) / (2 * step);
}

void check_gradient(ModelParams& P, const Quadruple& q) {
    SparseGrad grad;
    accumulate_fact_gradient(P, q, 1.0, grad);
    REQUIRE(!grad.empty());
    for (const auto& [key, g] : grad.rows) {
        const auto [slot, row] = key;
        for (std::size_t col = 0; col < g.size(); ++col) {
            const double fd = fd_partial(P, q, slot, row, col);
            const double denom = std::max({std::abs(fd), std::abs(g[col]), 1e-4});
            REQUIRE(std::abs(fd - g[col]) / denom < 1e-4);
        }
    }
}

}  // namespace

TEST_CASE("analytic gradients match central differences for all variants") {
    auto vocab = oracle::make_vocab(5, 3, 4);
    Rng rng = seeded_rng(55);
    for (auto [kind, variant] : oracle::all_model_variants()) {
        ModelParams P = init_params(kind, variant, vocab, Rank(4, 4), 13 + static_cast<int>(kind));
        for (int i = 0; i < 10; ++i) {
            Quadruple q = oracle::random_quadruple(vocab, rng);
            if (variant == Variant::semantic) q.t = 0;
            check_gradient(P, q);
        }
    }
}

TEST_CASE("gradients handle repeated rows (s == o)") {
    auto vocab = oracle::make_vocab(4, 2, 3);
    for (auto [kind, variant] : oracle::all_model_variants()) {
        ModelParams P = init_params(kind, variant, vocab, Rank(3, 3), 77);
        Quadruple q{1, 2, 1, 2, true};  // subject and object share an embedding row
        check_gradient(P, q);
    }
}

TEST_CASE("distmult time gradient is the stated product") {
    auto vocab = oracle::make_vocab(3, 2, 2);
    auto P = init_params(ModelKind::dist_mult, Variant::episodic, vocab, Rank(4), 3);
    const Quadruple q{1, 0, 1, 2, true};
    SparseGrad grad;
    accumulate_gradient(P, q, 1.0, grad);
    const auto lam = P.table(Slot::lambda).row(0);
    const auto s = P.table(Slot::entity_re).row(q.s);
    const auto p = P.table(Slot::predicate_re).row(q.p);
    const auto o = P.table(Slot::entity_re).row(q.o);
    const auto& gt = grad.rows.at({Slot::time_re, q.t});
    for (std::size_t i = 0; i < lam.size(); ++i) {
        REQUIRE_THAT(gt[i], Catch::Matchers::WithinAbs(lam[i] * s[i] * p[i] * o[i], 1e-14));
    }
}

TEST_CASE("zero-core tucker has zero entity gradients") {
    auto vocab = oracle::make_vocab(4, 2, 3);
    auto P = init_params(ModelKind::tucker, Variant::episodic, vocab, Rank(3, 2), 5);
    std::fill(P.table(Slot::core).values.begin(), P.table(Slot::core).values.end(), 0.0);
    SparseGrad grad;
    accumulate_gradient(P, Quadruple{0, 1, 0, 2, true}, 1.0, grad);
    for (const auto& [key, g] : grad.rows) {
        if (key.first == Slot::entity_re || key.first == Slot::predicate_re || key.first == Slot::time_re) {
            for (double v : g) CHECK(v == 0.0);
        }
    }
}

TEST_CASE("upstream weight scales the gradient linearly") {
    auto vocab = oracle::make_vocab(4, 2, 3);
    auto P = init_params(ModelKind::cont, Variant::episodic, vocab, Rank(3), 9);
    const Quadruple q{2, 0, 1, 3, true};
    SparseGrad g1, g2;
    accumulate_gradient(P, q, 1.0, g1);
    accumulate_gradient(P, q, -2.5, g2);
    for (const auto& [key, v1] : g1.rows) {
        const auto& v2 = g2.rows.at(key);
        for (std::size_t i = 0; i < v1.size(); ++i) {
            REQUIRE_THAT(v2[i], Catch::Matchers::WithinAbs(-2.5 * v1[i], 1e-13));
        }
    }
}

TEST_CASE("end-side gradients route to the end-time tables") {
    auto vocab = oracle::make_vocab(4, 2, 3);
    auto P = init_params(ModelKind::cont, Variant::episodic, vocab, Rank(3), 21);
    add_end_time_tables(P, 22);
    const Quadruple q{1, 0, 1, 2, true};
    SparseGrad grad;
    accumulate_gradient(P, q, 1.0, grad, TimeSide::end);
    CHECK(grad.rows.count({Slot::time_core_end, q.t}) == 1);
    CHECK(grad.rows.count({Slot::time_core, q.t}) == 0);

    // finite differences against the end-side score
    for (const auto& [key, g] : grad.rows) {
        const auto [slot, row] = key;
        for (std::size_t col = 0; col < g.size(); ++col) {
            double& x = P.table(slot).at(row, static_cast<std::int64_t>(col));
            const double saved = x;
            x = saved + 1e-5;
            const double hi = score(P, q, TimeSide::end);
            x = saved - 1e-5;
            const double lo = score(P, q, TimeSide::end);
            x = saved;
            const double fd = (hi - lo) / 2e-5;
            REQUIRE(std::abs(fd - g[col]) / std::max({std::abs(fd), std::abs(g[col]), 1e-4}) < 1e-4);
        }
    }
}
