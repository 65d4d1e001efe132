// Analytic score gradients. Each fact touches only the parameter rows it
// references, so gradients are kept as a sparse row map. Rows referenced
// twice by one fact (s == o, or the doubled time index in the tree model)
// accumulate both contributions.
#pragma once

#include <map>

#include "ekge/scoring.hpp"

namespace ekge {

struct SparseGrad {
    // (slot, row) -> dense row gradient. Ordered map keeps the application
    // order deterministic.
    std::map<std::pair<Slot, std::int64_t>, std::vector<double>> rows;

    std::vector<double>& row(Slot slot, std::int64_t r, std::size_t cols) {
        auto& v = rows[{slot, r}];
        if (v.empty()) v.assign(cols, 0.0);
        return v;
    }

    void axpy(Slot slot, std::int64_t r, std::span<const double> g, double scale) {
        auto& v = row(slot, r, g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] += scale * g[i];
    }

    void clear() { rows.clear(); }
    bool empty() const { return rows.empty(); }
};

namespace detail {

// d(bilinear)/du, /dmat, /dw with upstream u0.
inline void bilinear_backward(std::span<const double> u, std::span<const double> mat, std::span<const double> w,
                              double u0, std::span<double> du, std::span<double> dmat, std::span<double> dw) {
    const std::size_t r = u.size();
    for (std::size_t i = 0; i < r; ++i) {
        const double* row = mat.data() + i * r;
        double inner = 0.0;
        for (std::size_t j = 0; j < r; ++j) {
            inner += row[j] * w[j];
            dmat[i * r + j] += u0 * u[i] * w[j];
            dw[j] += u0 * u[i] * row[j];
        }
        du[i] += u0 * inner;
    }
}

// d(trilinear)/d{x,y,z,core} with upstream u0.
inline void trilinear_backward(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                               std::span<const double> core, double u0, std::span<double> dx,
                               std::span<double> dy, std::span<double> dz, std::span<double> dcore) {
    const std::size_t A = x.size(), B = y.size(), C = z.size();
    for (std::size_t a = 0; a < A; ++a) {
        double acc_a = 0.0;
        for (std::size_t b = 0; b < B; ++b) {
            const double* slab = core.data() + (a * B + b) * C;
            double* dslab = dcore.data() + (a * B + b) * C;
            double acc_b = 0.0;
            const double xy = x[a] * y[b];
            for (std::size_t c = 0; c < C; ++c) {
                acc_b += z[c] * slab[c];
                dz[c] += u0 * xy * slab[c];
                dslab[c] += u0 * xy * z[c];
            }
            dy[b] += u0 * x[a] * acc_b;
            acc_a += y[b] * acc_b;
        }
        dx[a] += u0 * acc_a;
    }
}

}  // namespace detail

// Accumulates upstream * d(score)/d(params) into grad for an episodic fact.
inline void accumulate_gradient(const ModelParams& P, const Quadruple& q, double upstream, SparseGrad& grad,
                                TimeSide side = TimeSide::start) {
    if (P.variant != Variant::episodic) {
        throw std::invalid_argument("accumulate_gradient: quadruple given to a semantic model");
    }
    const auto& E = P.table(Slot::entity_re);
    const Slot time_slot = detail::time_embedding_slot(side);
    switch (P.kind) {
        case ModelKind::dist_mult: {
            const auto lam = P.table(Slot::lambda).row(0);
            const auto t = P.table(time_slot).row(q.t);
            const auto s = E.row(q.s), o = E.row(q.o);
            const auto p = P.table(Slot::predicate_re).row(q.p);
            const std::size_t r = lam.size();
            auto& gt = grad.row(time_slot, q.t, r);
            auto& gs = grad.row(Slot::entity_re, q.s, r);
            auto& gp = grad.row(Slot::predicate_re, q.p, r);
            auto& go = grad.row(Slot::entity_re, q.o, r);
            auto& gl = grad.row(Slot::lambda, 0, r);
            for (std::size_t i = 0; i < r; ++i) {
                gt[i] += upstream * lam[i] * s[i] * p[i] * o[i];
                gs[i] += upstream * lam[i] * t[i] * p[i] * o[i];
                gp[i] += upstream * lam[i] * t[i] * s[i] * o[i];
                go[i] += upstream * lam[i] * t[i] * s[i] * p[i];
                gl[i] += upstream * t[i] * s[i] * p[i] * o[i];
            }
            return;
        }
        case ModelKind::hole: {
            const auto t = detail::to_vec(P.table(time_slot).row(q.t));
            const auto s = detail::to_vec(E.row(q.s));
            const auto o = detail::to_vec(E.row(q.o));
            const auto p = detail::to_vec(P.table(Slot::predicate_re).row(q.p));
            const auto c = circular_correlation(s, o);
            // theta = t . (p corr c)
            grad.axpy(time_slot, q.t, circular_correlation(p, c), upstream);
            grad.axpy(Slot::predicate_re, q.p, circular_correlation(t, c), upstream);
            const auto dc = circular_convolution(t, p);
            grad.axpy(Slot::entity_re, q.s, circular_correlation(dc, o), upstream);
            grad.axpy(Slot::entity_re, q.o, circular_convolution(dc, s), upstream);
            return;
        }
        case ModelKind::complex: {
            const auto& Ei = P.table(Slot::entity_im);
            const Slot time_im = detail::time_embedding_im_slot(side);
            const auto tr_ = P.table(time_slot).row(q.t), ti = P.table(time_im).row(q.t);
            const auto sr = E.row(q.s), si = Ei.row(q.s), or_ = E.row(q.o), oi = Ei.row(q.o);
            const auto pr = P.table(Slot::predicate_re).row(q.p), pi = P.table(Slot::predicate_im).row(q.p);
            const std::size_t r = tr_.size();
            auto& gtr = grad.row(time_slot, q.t, r);
            auto& gti = grad.row(time_im, q.t, r);
            auto& gsr = grad.row(Slot::entity_re, q.s, r);
            auto& gsi = grad.row(Slot::entity_im, q.s, r);
            auto& gpr = grad.row(Slot::predicate_re, q.p, r);
            auto& gpi = grad.row(Slot::predicate_im, q.p, r);
            auto& gor = grad.row(Slot::entity_re, q.o, r);
            auto& goi = grad.row(Slot::entity_im, q.o, r);
            for (std::size_t i = 0; i < r; ++i) {
                const std::complex<double> T(tr_[i], ti[i]), S(sr[i], si[i]), Pc(pr[i], pi[i]);
                const std::complex<double> Oc(or_[i], -oi[i]);  // conjugated
                const std::complex<double> dT = S * Pc * Oc;
                const std::complex<double> dS = T * Pc * Oc;
                const std::complex<double> dP = T * S * Oc;
                const std::complex<double> W = T * S * Pc;  // theta_i = Re(W * conj(O))
                gtr[i] += upstream * dT.real();
                gti[i] -= upstream * dT.imag();
                gsr[i] += upstream * dS.real();
                gsi[i] -= upstream * dS.imag();
                gpr[i] += upstream * dP.real();
                gpi[i] -= upstream * dP.imag();
                gor[i] += upstream * W.real();
                goi[i] += upstream * W.imag();
            }
            return;
        }
        case ModelKind::tucker: {
            const auto t = P.table(time_slot).row(q.t);
            const auto s = E.row(q.s), o = E.row(q.o);
            const auto p = P.table(Slot::predicate_re).row(q.p);
            const auto core = P.table(Slot::core).row(0);
            const std::size_t r = s.size(), rt = t.size();
            auto& gt = grad.row(time_slot, q.t, rt);
            auto& gs = grad.row(Slot::entity_re, q.s, r);
            auto& gp = grad.row(Slot::predicate_re, q.p, r);
            auto& go = grad.row(Slot::entity_re, q.o, r);
            auto& gcore = grad.row(Slot::core, 0, static_cast<std::size_t>(core.size()));
            for (std::size_t r1 = 0; r1 < rt; ++r1) {
                const auto slab = core.subspan(r1 * r * r * r, r * r * r);
                auto dslab = std::span<double>(gcore).subspan(r1 * r * r * r, r * r * r);
                // contribution of slab r1: t[r1] * trilinear(s,p,o,slab)
                double theta_slab = detail::trilinear(s, p, o, slab);
                gt[r1] += upstream * theta_slab;
                detail::trilinear_backward(s, p, o, slab, upstream * t[r1], gs, gp, go, dslab);
            }
            return;
        }
        case ModelKind::tree: {
            const auto t = P.table(time_slot).row(q.t);
            const auto s = E.row(q.s), o = E.row(q.o);
            const auto g1 = P.table(Slot::tree_g1).row(0);
            const auto g2 = P.table(Slot::tree_g2).row(0);
            const auto gp_mat = P.table(Slot::pred_matrix).row(q.p);
            const std::size_t r = s.size(), rt = t.size();

            std::vector<double> u(r, 0.0), w(r, 0.0);
            for (std::size_t r1 = 0; r1 < rt; ++r1) {
                for (std::size_t r2 = 0; r2 < r; ++r2) {
                    const double w12 = t[r1] * s[r2];
                    const double* slab = g1.data() + (r1 * r + r2) * r;
                    for (std::size_t r3 = 0; r3 < r; ++r3) u[r3] += w12 * slab[r3];
                }
            }
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
            // theta = u^T Gp w; y = Gp w and v = Gp^T u close over the two
            // subtree contractions.
            std::vector<double> y(r, 0.0), v(r, 0.0);
            auto& gmat = grad.row(Slot::pred_matrix, q.p, r * r);
            for (std::size_t r3 = 0; r3 < r; ++r3) {
                const double* row = gp_mat.data() + r3 * r;
                for (std::size_t r4 = 0; r4 < r; ++r4) {
                    y[r3] += row[r4] * w[r4];
                    v[r4] += row[r4] * u[r3];
                    gmat[r3 * r + r4] += upstream * u[r3] * w[r4];
                }
            }
            auto& gt = grad.row(time_slot, q.t, rt);
            auto& gs = grad.row(Slot::entity_re, q.s, r);
            auto& go = grad.row(Slot::entity_re, q.o, r);
            auto& gg1 = grad.row(Slot::tree_g1, 0, static_cast<std::size_t>(g1.size()));
            auto& gg2 = grad.row(Slot::tree_g2, 0, static_cast<std::size_t>(g2.size()));
            // back through u[r3] = sum t[r1] s[r2] g1[r1,r2,r3] with upstream y
            for (std::size_t r1 = 0; r1 < rt; ++r1) {
                for (std::size_t r2 = 0; r2 < r; ++r2) {
                    const double* slab = g1.data() + (r1 * r + r2) * r;
                    double* dslab = gg1.data() + (r1 * r + r2) * r;
                    double inner = 0.0;
                    for (std::size_t r3 = 0; r3 < r; ++r3) {
                        inner += slab[r3] * y[r3];
                        dslab[r3] += upstream * t[r1] * s[r2] * y[r3];
                    }
                    gt[r1] += upstream * s[r2] * inner;
                    gs[r2] += upstream * t[r1] * inner;
                }
            }
            // back through w[r4] = sum o[r5] t[r6] g2[r4,r5,r6] with upstream v
            for (std::size_t r4 = 0; r4 < r; ++r4) {
                for (std::size_t r5 = 0; r5 < r; ++r5) {
                    const double* slab = g2.data() + (r4 * r + r5) * rt;
                    double* dslab = gg2.data() + (r4 * r + r5) * rt;
                    double inner = 0.0;
                    for (std::size_t r6 = 0; r6 < rt; ++r6) {
                        inner += slab[r6] * t[r6];
                        dslab[r6] += upstream * v[r4] * o[r5] * t[r6];
                        gt[r6] += upstream * v[r4] * o[r5] * slab[r6];
                    }
                    go[r5] += upstream * v[r4] * inner;
                }
            }
            return;
        }
        case ModelKind::cont: {
            const Slot core_slot = detail::time_core_slot(side);
            const auto s = E.row(q.s), o = E.row(q.o);
            const auto p = P.table(Slot::predicate_re).row(q.p);
            const auto core = P.table(core_slot).row(q.t);
            const std::size_t r = s.size();
            auto& gs = grad.row(Slot::entity_re, q.s, r);
            auto& gp = grad.row(Slot::predicate_re, q.p, r);
            auto& go = grad.row(Slot::entity_re, q.o, r);
            auto& gcore = grad.row(core_slot, q.t, r * r * r);
            detail::trilinear_backward(s, p, o, core, upstream, gs, gp, go, gcore);
            return;
        }
        default: break;
    }
    throw std::invalid_argument("accumulate_gradient: unsupported episodic kind " + kind_name(P.kind));
}

inline void accumulate_gradient(const ModelParams& P, const Triple& tr, double upstream, SparseGrad& grad);

// Uniform fact view, mirroring score_fact.
inline void accumulate_fact_gradient(const ModelParams& P, const Quadruple& q, double upstream, SparseGrad& grad,
                                     TimeSide side = TimeSide::start) {
    if (P.variant == Variant::episodic) accumulate_gradient(P, q, upstream, grad, side);
    else accumulate_gradient(P, Triple{q.s, q.p, q.o, q.value}, upstream, grad);
}

// Semantic counterpart.
inline void accumulate_gradient(const ModelParams& P, const Triple& tr, double upstream, SparseGrad& grad) {
    if (P.variant != Variant::semantic) {
        throw std::invalid_argument("accumulate_gradient: triple given to an episodic model");
    }
    const auto& E = P.table(Slot::entity_re);
    switch (P.kind) {
        case ModelKind::dist_mult: {
            const auto lam = P.table(Slot::lambda).row(0);
            const auto s = E.row(tr.s), o = E.row(tr.o);
            const auto p = P.table(Slot::predicate_re).row(tr.p);
            const std::size_t r = lam.size();
            auto& gs = grad.row(Slot::entity_re, tr.s, r);
            auto& gp = grad.row(Slot::predicate_re, tr.p, r);
            auto& go = grad.row(Slot::entity_re, tr.o, r);
            auto& gl = grad.row(Slot::lambda, 0, r);
            for (std::size_t i = 0; i < r; ++i) {
                gs[i] += upstream * lam[i] * p[i] * o[i];
                gp[i] += upstream * lam[i] * s[i] * o[i];
                go[i] += upstream * lam[i] * s[i] * p[i];
                gl[i] += upstream * s[i] * p[i] * o[i];
            }
            return;
        }
        case ModelKind::hole: {
            const auto s = detail::to_vec(E.row(tr.s));
            const auto o = detail::to_vec(E.row(tr.o));
            const auto p = detail::to_vec(P.table(Slot::predicate_re).row(tr.p));
            grad.axpy(Slot::predicate_re, tr.p, circular_correlation(s, o), upstream);
            grad.axpy(Slot::entity_re, tr.s, circular_correlation(p, o), upstream);
            grad.axpy(Slot::entity_re, tr.o, circular_convolution(p, s), upstream);
            return;
        }
        case ModelKind::complex: {
            const auto& Ei = P.table(Slot::entity_im);
            const auto sr = E.row(tr.s), si = Ei.row(tr.s), or_ = E.row(tr.o), oi = Ei.row(tr.o);
            const auto pr = P.table(Slot::predicate_re).row(tr.p), pi = P.table(Slot::predicate_im).row(tr.p);
            const std::size_t r = sr.size();
            auto& gsr = grad.row(Slot::entity_re, tr.s, r);
            auto& gsi = grad.row(Slot::entity_im, tr.s, r);
            auto& gpr = grad.row(Slot::predicate_re, tr.p, r);
            auto& gpi = grad.row(Slot::predicate_im, tr.p, r);
            auto& gor = grad.row(Slot::entity_re, tr.o, r);
            auto& goi = grad.row(Slot::entity_im, tr.o, r);
            for (std::size_t i = 0; i < r; ++i) {
                const std::complex<double> S(sr[i], si[i]), Pc(pr[i], pi[i]), Oc(or_[i], -oi[i]);
                const std::complex<double> dS = Pc * Oc;
                const std::complex<double> dP = S * Oc;
                const std::complex<double> W = S * Pc;
                gsr[i] += upstream * dS.real();
                gsi[i] -= upstream * dS.imag();
                gpr[i] += upstream * dP.real();
                gpi[i] -= upstream * dP.imag();
                gor[i] += upstream * W.real();
                goi[i] += upstream * W.imag();
            }
            return;
        }
        case ModelKind::tucker: {
            const auto s = E.row(tr.s), o = E.row(tr.o);
            const auto p = P.table(Slot::predicate_re).row(tr.p);
            const auto core = P.table(Slot::core).row(0);
            const std::size_t r = s.size();
            auto& gs = grad.row(Slot::entity_re, tr.s, r);
            auto& gp = grad.row(Slot::predicate_re, tr.p, r);
            auto& go = grad.row(Slot::entity_re, tr.o, r);
            auto& gcore = grad.row(Slot::core, 0, r * r * r);
            detail::trilinear_backward(s, p, o, core, upstream, gs, gp, go, gcore);
            return;
        }
        case ModelKind::rescal: {
            const auto s = E.row(tr.s), o = E.row(tr.o);
            const auto mat = P.table(Slot::pred_matrix).row(tr.p);
            const std::size_t r = s.size();
            auto& gs = grad.row(Slot::entity_re, tr.s, r);
            auto& go = grad.row(Slot::entity_re, tr.o, r);
            auto& gmat = grad.row(Slot::pred_matrix, tr.p, r * r);
            detail::bilinear_backward(s, mat, o, upstream, gs, gmat, go);
            return;
        }
        default: break;
    }
    throw std::invalid_argument("accumulate_gradient: unsupported semantic kind " + kind_name(P.kind));
}

}  // namespace ekge
