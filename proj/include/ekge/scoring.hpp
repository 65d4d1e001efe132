// Indicator (logit) functions for every model variant. A fact's
// probability is sigmoid(score); scoring itself returns the raw logit.
//
// Episodic models consume quadruples, semantic models consume triples.
// TimeSide selects which time representation a quadruple is scored
// against: the regular (start) tables or the end-time tables created by
// two-stage training.
#pragma once

#include <complex>

#include "ekge/circular.hpp"
#include "ekge/params.hpp"

namespace ekge {

enum class TimeSide { start, end };

namespace detail {

inline Slot time_embedding_slot(TimeSide side) {
    return side == TimeSide::start ? Slot::time_re : Slot::time_end_re;
}
inline Slot time_embedding_im_slot(TimeSide side) {
    return side == TimeSide::start ? Slot::time_im : Slot::time_end_im;
}
inline Slot time_core_slot(TimeSide side) {
    return side == TimeSide::start ? Slot::time_core : Slot::time_core_end;
}

inline std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

// theta = u^T Gp w for one predicate matrix stored row-major.
inline double bilinear(std::span<const double> u, std::span<const double> mat, std::span<const double> w) {
    const std::size_t r = u.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        double inner = 0.0;
        const double* row = mat.data() + i * r;
        for (std::size_t j = 0; j < r; ++j) inner += row[j] * w[j];
        acc += u[i] * inner;
    }
    return acc;
}

// Trilinear contraction sum_{abc} x_a y_b z_c core[a,b,c].
inline double trilinear(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                        std::span<const double> core) {
    const std::size_t A = x.size(), B = y.size(), C = z.size();
    double acc = 0.0;
    for (std::size_t a = 0; a < A; ++a) {
        double acc_a = 0.0;
        for (std::size_t b = 0; b < B; ++b) {
            const double* slab = core.data() + (a * B + b) * C;
            double acc_b = 0.0;
            for (std::size_t c = 0; c < C; ++c) acc_b += z[c] * slab[c];
            acc_a += y[b] * acc_b;
        }
        acc += x[a] * acc_a;
    }
    return acc;
}

inline double distmult_product(std::span<const double> lambda, std::span<const double> a,
                               std::span<const double> b, std::span<const double> c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) acc += lambda[i] * a[i] * b[i] * c[i];
    return acc;
}

}  // namespace detail

inline double score(const ModelParams& P, const Triple& tr);

inline double score(const ModelParams& P, const Quadruple& q, TimeSide side = TimeSide::start) {
    if (P.variant != Variant::episodic) {
        throw std::invalid_argument("score: quadruple given to a semantic model");
    }
    const auto& E = P.table(Slot::entity_re);
    switch (P.kind) {
        case ModelKind::dist_mult: {
            const auto lam = P.table(Slot::lambda).row(0);
            const auto t = P.table(detail::time_embedding_slot(side)).row(q.t);
            const auto s = E.row(q.s), o = E.row(q.o);
            const auto p = P.table(Slot::predicate_re).row(q.p);
            double acc = 0.0;
            for (std::size_t i = 0; i < lam.size(); ++i) acc += lam[i] * t[i] * s[i] * p[i] * o[i];
            return acc;
        }
        case ModelKind::hole: {
            const auto t = P.table(detail::time_embedding_slot(side)).row(q.t);
            auto so = circular_correlation(detail::to_vec(E.row(q.s)), detail::to_vec(E.row(q.o)));
            auto pso = circular_correlation(detail::to_vec(P.table(Slot::predicate_re).row(q.p)), so);
            double acc = 0.0;
            for (std::size_t i = 0; i < pso.size(); ++i) acc += t[i] * pso[i];
            return acc;
        }
        case ModelKind::complex: {
            const auto& Ei = P.table(Slot::entity_im);
            const auto tr_ = P.table(detail::time_embedding_slot(side)).row(q.t);
            const auto ti = P.table(detail::time_embedding_im_slot(side)).row(q.t);
            const auto sr = E.row(q.s), si = Ei.row(q.s), or_ = E.row(q.o), oi = Ei.row(q.o);
            const auto pr = P.table(Slot::predicate_re).row(q.p), pi = P.table(Slot::predicate_im).row(q.p);
            double acc = 0.0;
            for (std::size_t i = 0; i < tr_.size(); ++i) {
                const std::complex<double> prod = std::complex<double>(tr_[i], ti[i]) *
                                                  std::complex<double>(sr[i], si[i]) *
                                                  std::complex<double>(pr[i], pi[i]) *
                                                  std::complex<double>(or_[i], -oi[i]);
                acc += prod.real();
            }
            return acc;
        }
        case ModelKind::tucker: {
            const auto t = P.table(detail::time_embedding_slot(side)).row(q.t);
            const auto s = E.row(q.s), o = E.row(q.o);
            const auto p = P.table(Slot::predicate_re).row(q.p);
            const auto core = P.table(Slot::core).row(0);
            const std::size_t r = s.size();
            double acc = 0.0;
            for (std::size_t r1 = 0; r1 < t.size(); ++r1) {
                const std::span<const double> slab = core.subspan(r1 * r * r * r, r * r * r);
                acc += t[r1] * detail::trilinear(s, p, o, slab);
            }
            return acc;
        }
        case ModelKind::tree: {
            const auto t = P.table(detail::time_embedding_slot(side)).row(q.t);
            const auto s = E.row(q.s), o = E.row(q.o);
            const auto g1 = P.table(Slot::tree_g1).row(0);
            const auto g2 = P.table(Slot::tree_g2).row(0);
            const auto gp = P.table(Slot::pred_matrix).row(q.p);
            const std::size_t r = s.size(), rt = t.size();
            // u[r3] = sum_{r1,r2} t[r1] s[r2] g1[r1,r2,r3]
            std::vector<double> u(r, 0.0);
            for (std::size_t r1 = 0; r1 < rt; ++r1) {
                for (std::size_t r2 = 0; r2 < r; ++r2) {
                    const double w12 = t[r1] * s[r2];
                    const double* slab = g1.data() + (r1 * r + r2) * r;
                    for (std::size_t r3 = 0; r3 < r; ++r3) u[r3] += w12 * slab[r3];
                }
            }
            // w[r4] = sum_{r5,r6} o[r5] t[r6] g2[r4,r5,r6]
            std::vector<double> w(r, 0.0);
            for (std::size_t r4 = 0; r4 < r; ++r4) {
                double acc4 = 0.0;
                for (std::size_t r5 = 0; r5 < r; ++r5) {
                    const double* slab = g2.data() + (r4 * r + r5) * rt;
                    double inner = 0.0;
                    for (std::size_t r6 = 0; r6 < rt; ++r6) inner += t[r6] * slab[r6];
                    acc4 += o[r5] * inner;
                }
                w[r4] = acc4;
            }
            return detail::bilinear(u, gp, w);
        }
        case ModelKind::cont: {
            const auto s = E.row(q.s), o = E.row(q.o);
            const auto p = P.table(Slot::predicate_re).row(q.p);
            const auto core = P.table(detail::time_core_slot(side)).row(q.t);
            return detail::trilinear(s, p, o, core);
        }
        default: break;
    }
    throw std::invalid_argument("score: unsupported episodic kind " + kind_name(P.kind));
}

// Uniform fact view: semantic models score a quadruple by its triple part
// (datasets for semantic training pin every fact at t = 0).
inline double score_fact(const ModelParams& P, const Quadruple& q, TimeSide side = TimeSide::start) {
    if (P.variant == Variant::episodic) return score(P, q, side);
    return score(P, Triple{q.s, q.p, q.o, q.value});
}

inline double score(const ModelParams& P, const Triple& tr) {
    if (P.variant != Variant::semantic) {
        throw std::invalid_argument("score: triple given to an episodic model");
    }
    const auto& E = P.table(Slot::entity_re);
    switch (P.kind) {
        case ModelKind::dist_mult:
            return detail::distmult_product(P.table(Slot::lambda).row(0), E.row(tr.s),
                                            P.table(Slot::predicate_re).row(tr.p), E.row(tr.o));
        case ModelKind::hole: {
            const auto p = P.table(Slot::predicate_re).row(tr.p);
            auto so = circular_correlation(detail::to_vec(E.row(tr.s)), detail::to_vec(E.row(tr.o)));
            double acc = 0.0;
            for (std::size_t i = 0; i < so.size(); ++i) acc += p[i] * so[i];
            return acc;
        }
        case ModelKind::complex: {
            const auto& Ei = P.table(Slot::entity_im);
            const auto sr = E.row(tr.s), si = Ei.row(tr.s), or_ = E.row(tr.o), oi = Ei.row(tr.o);
            const auto pr = P.table(Slot::predicate_re).row(tr.p), pi = P.table(Slot::predicate_im).row(tr.p);
            double acc = 0.0;
            for (std::size_t i = 0; i < sr.size(); ++i) {
                const std::complex<double> prod = std::complex<double>(sr[i], si[i]) *
                                                  std::complex<double>(pr[i], pi[i]) *
                                                  std::complex<double>(or_[i], -oi[i]);
                acc += prod.real();
            }
            return acc;
        }
        case ModelKind::tucker:
            return detail::trilinear(E.row(tr.s), P.table(Slot::predicate_re).row(tr.p), E.row(tr.o),
                                     P.table(Slot::core).row(0));
        case ModelKind::rescal:
            return detail::bilinear(E.row(tr.s), P.table(Slot::pred_matrix).row(tr.p), E.row(tr.o));
        default: break;
    }
    throw std::invalid_argument("score: unsupported semantic kind " + kind_name(P.kind));
}

}  // namespace ekge
