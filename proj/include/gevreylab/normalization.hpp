#ifndef GEVREYLAB_NORMALIZATION_HPP
#define GEVREYLAB_NORMALIZATION_HPP

#include <mutex>

#include "gevreylab/graded_table.hpp"
#include "gevreylab/resonance.hpp"

namespace gevreylab {

// Formal normalization tables of x = y + g(z,y) for the input system, graded
// by |Q|. Degree-1 rows hold the identity (g_{e_l} = e_l); t_Q = 0 for
// |Q| <= 1. w_Q = z^{k|Q|} g_Q and u_Q = z^{k|Q|} t_Q. Borel-plane tables
// W, U are order-1 transforms of the sigma_k-reduced w/u series; G carries
// the order-k Borel transform of g_Q (stride-k coefficients for k > 1).
struct NormalizationResult {
    using VecZ = std::vector<ZSeries>;
    using VecB = std::vector<BorelSeries>;
    using ZTable = std::map<MultiIndex, VecZ, GradedLexLess>;
    using BTable = std::map<MultiIndex, VecB, GradedLexLess>;

    VectorFieldSpec spec;
    int N = 0;
    int M = 0;
    ZTable g, t, w, u;
    BTable W, U, G;
    int borel_degree = 0;  // Borel tables filled for 1 <= |Q| <= borel_degree

    cplx lambda_Q(const MultiIndex& Q, int i) const {
        cplx v = -spec.lambda[i];
        for (int l = 0; l < spec.n; ++l) v += double(Q[l]) * spec.lambda[l];
        return v;
    }
    cplx alpha_Q(const MultiIndex& Q, int i) const {
        cplx v = -spec.alpha[i];
        for (int l = 0; l < spec.n; ++l) v += double(Q[l]) * spec.alpha[l];
        return v;
    }
    cplx beta_Q(const MultiIndex& Q, int i) const {
        return alpha_Q(Q, i) - double(spec.k * Q.degree());
    }

    double table_max_abs() const {
        double m = 0.0;
        for (const auto& [Q, comps] : g)
            for (const auto& s : comps) m = std::max(m, s.max_abs());
        for (const auto& [Q, comps] : t)
            for (const auto& s : comps) m = std::max(m, s.max_abs());
        return m;
    }
};

// Unique formal solution of  z^{k+1} g' + (lambda_Q + z^k alpha_Q) g = z^k t_Q
// to order M. Nonresonant (lambda_Q != 0): triangular recurrence
//   g_nu = (t_{nu-k} - (nu-k+alpha_Q) g_{nu-k}) / lambda_Q,   g_nu = 0, nu < k.
// Resonant (lambda_Q = 0): direct division (mu + alpha_Q) g_mu = t_mu; H3 is
// exactly the condition that no divisor vanishes.
inline ZSeries solve_gQ_ode(cplx lambda_Q, cplx alpha_Q, const ZSeries& tQ, int k, int M,
                            const Tolerances& tol = {}, int ctx_i = 0,
                            const MultiIndex& ctx_Q = MultiIndex()) {
    if (k < 1) throw precondition_error("solve_gQ_ode: k must be >= 1");
    ZSeries g = ZSeries::zero(M);
    if (std::abs(lambda_Q) <= tol.eps_res) {
        for (int mu = 0; mu <= M; ++mu) {
            cplx div = double(mu) + alpha_Q;
            if (std::abs(div) < tol.divisor)
                throw solve_error("zero divisor n + alpha_Q at (i=" + std::to_string(ctx_i) +
                                      ", Q=" + ctx_Q.str() + ", n=" + std::to_string(mu) +
                                      "): H3 violated",
                                  ctx_i, ctx_Q.entries(), mu);
            g.set_coeff(mu, tQ.coeff(mu) / div);
        }
    } else {
        for (int nu = k; nu <= M; ++nu) {
            cplx prev = g.coeff(nu - k);
            g.set_coeff(nu, (tQ.coeff(nu - k) - (double(nu - k) + alpha_Q) * prev) / lambda_Q);
        }
    }
    return g;
}

namespace detail {

// f_j(z) images truncated to order M, for the z-plane assembly.
inline std::map<MultiIndex, std::vector<ZSeries>, GradedLexLess>
f_images_z(const VectorFieldSpec& spec, int M) {
    std::map<MultiIndex, std::vector<ZSeries>, GradedLexLess> out;
    for (const auto& [j, comps] : spec.f) {
        std::vector<ZSeries> v;
        v.reserve(spec.n);
        for (const auto& s : comps) v.push_back(s.truncated(M));
        out.emplace(j, std::move(v));
    }
    return out;
}

// Substituted-variable tables Y_l = y_l + sum_{2 <= |P| <= deg_cap} g_P[l] y^P.
inline std::vector<ScalarTable<ZSeriesRing>>
y_tables_z(const NormalizationResult& res, int deg_cap, int M) {
    std::vector<ScalarTable<ZSeriesRing>> Y(res.spec.n);
    for (const auto& [P, comps] : res.g) {
        if (P.degree() > deg_cap) continue;
        for (int l = 0; l < res.spec.n; ++l) {
            if (comps[l].is_zero()) continue;
            Y[l].emplace(P, comps[l].truncated(M));
        }
    }
    return Y;
}

}  // namespace detail

// t_Q(z) for |Q| = m from the lower-degree g table: coefficient of y^Q in
// f(z, y + g(z,y)). Computed by substitution and collection, which agrees
// with the partition sum of the recurrence but reuses series arithmetic.
inline std::vector<ZSeries> assemble_tQ(const NormalizationResult::ZTable& g_table,
                                        const VectorFieldSpec& spec, const MultiIndex& Q,
                                        int M) {
    int m = Q.degree();
    if (m <= 1) return std::vector<ZSeries>(spec.n, ZSeries::zero(M));
    // grading precondition: every lower-degree entry present
    for (int d = 1; d < m; ++d) {
        std::size_t have = 0;
        for (const auto& [P, comps] : g_table)
            if (P.degree() == d) ++have;
        if (double(have) != count_degree(spec.n, d))
            throw structural_error("assemble_tQ: missing g entries at degree " + std::to_string(d));
    }
    ZSeriesRing ring(M);
    std::vector<ScalarTable<ZSeriesRing>> Y(spec.n);
    for (const auto& [P, comps] : g_table) {
        if (P.degree() >= m) continue;
        for (int l = 0; l < spec.n; ++l)
            if (!comps[l].is_zero()) Y[l].emplace(P, comps[l].truncated(M));
    }
    auto rhs = assemble_rhs(ring, spec.n, detail::f_images_z(spec, M), Y, m);
    auto it = rhs.find(Q);
    if (it == rhs.end()) return std::vector<ZSeries>(spec.n, ZSeries::zero(M));
    return it->second;
}

// Gate used by formal_normalize: well-preparedness plus H1-H4.
inline void require_hypotheses(const VectorFieldSpec& spec, int scan_degree) {
    WellPreparedReport wp = check_well_prepared(spec);
    HypothesisReport hr = check_hypotheses(spec, scan_degree);
    std::string msg;
    if (!wp.ok)
        for (const auto& d : wp.diagnostics) msg += "well-prepared: " + d + "; ";
    if (!hr.h1) msg += "H1 fails; ";
    if (!hr.h2) msg += "H2 fails; ";
    if (!hr.h3) msg += "H3 fails; ";
    if (!hr.h4) msg += "H4 fails; ";
    if (!msg.empty()) throw hypothesis_error(msg);
}

// Fill g (and t, w, u) for 1 <= |Q| <= N by grading. Within a degree shell the
// solves are independent; shells are sequential.
inline NormalizationResult formal_normalize(const VectorFieldSpec& spec, int N, int M,
                                            bool force = false) {
    spec.validate();
    if (N < 1 || M < 0) throw precondition_error("formal_normalize: invalid truncations");
    if (!force) require_hypotheses(spec, std::max(2, N));

    NormalizationResult res;
    res.spec = spec;
    res.N = N;
    res.M = M;
    const int n = spec.n, k = spec.k;

    for (int l = 0; l < n; ++l) {
        MultiIndex e = MultiIndex::unit(n, l);
        NormalizationResult::VecZ comp(n, ZSeries::zero(M));
        comp[l] = ZSeries::constant(1.0, M);
        res.g.emplace(e, comp);
        res.t.emplace(e, NormalizationResult::VecZ(n, ZSeries::zero(M)));
        NormalizationResult::VecZ wrow(n, ZSeries::zero(M + k));
        wrow[l] = ZSeries::monomial(1.0, k, M + k);
        res.w.emplace(e, wrow);
        res.u.emplace(e, NormalizationResult::VecZ(n, ZSeries::zero(M + k)));
    }

    ZSeriesRing ring(M);
    auto fimg = detail::f_images_z(spec, M);
    for (int m = 2; m <= N; ++m) {
        auto Y = detail::y_tables_z(res, m - 1, M);
        auto rhs = assemble_rhs(ring, n, fimg, Y, m);

        std::vector<MultiIndex> shell;
        for_each_degree(n, m, [&](const MultiIndex& Q) { shell.push_back(Q); });
        std::vector<NormalizationResult::VecZ> tvals(shell.size()), gvals(shell.size());
        std::exception_ptr first_err;
        std::mutex err_mutex;
        parallel_for(shell.size(), [&](std::size_t idx) {
            try {
                const MultiIndex& Q = shell[idx];
                auto it = rhs.find(Q);
                NormalizationResult::VecZ tQ =
                    (it != rhs.end() && Q.degree() == m) ? it->second
                                                         : NormalizationResult::VecZ(n, ZSeries::zero(M));
                NormalizationResult::VecZ gQ;
                gQ.reserve(n);
                for (int i = 0; i < n; ++i)
                    gQ.push_back(solve_gQ_ode(res.lambda_Q(Q, i), res.alpha_Q(Q, i), tQ[i], k, M,
                                              spec.tol, i + 1, Q));
                tvals[idx] = std::move(tQ);
                gvals[idx] = std::move(gQ);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_err) first_err = std::current_exception();
            }
        });
        if (first_err) std::rethrow_exception(first_err);

        for (std::size_t idx = 0; idx < shell.size(); ++idx) {
            const MultiIndex& Q = shell[idx];
            NormalizationResult::VecZ wrow, urow;
            for (int i = 0; i < n; ++i) {
                wrow.push_back(zs_shift_up(gvals[idx][i], k * m));
                urow.push_back(zs_shift_up(tvals[idx][i], k * m));
            }
            res.t.emplace(Q, std::move(tvals[idx]));
            res.g.emplace(Q, std::move(gvals[idx]));
            res.w.emplace(Q, std::move(wrow));
            res.u.emplace(Q, std::move(urow));
        }
    }
    return res;
}

// Residual of the conjugacy identity: recompute T = f(z, y+g) from the full
// final table and evaluate the coefficient ODE defect, relative to the
// largest retained table coefficient.
inline double conjugacy_residual(const NormalizationResult& res) {
    const int n = res.spec.n, k = res.spec.k, M = res.M;
    ZSeriesRing ring(M);
    auto Y = detail::y_tables_z(res, res.N, M);
    auto rhs = assemble_rhs(ring, n, detail::f_images_z(res.spec, M), Y, res.N);

    double scale = std::max(1.0, res.table_max_abs());
    double worst = 0.0;
    for (const auto& [Q, comps] : res.g) {
        auto it = rhs.find(Q);
        for (int i = 0; i < n; ++i) {
            cplx lQ = res.lambda_Q(Q, i), aQ = res.alpha_Q(Q, i);
            const ZSeries& gq = comps[i];
            for (int nu = 0; nu <= M; ++nu) {
                cplx r = lQ * gq.coeff(nu);
                if (nu >= k) {
                    r += (double(nu - k) + aQ) * gq.coeff(nu - k);
                    if (it != rhs.end()) r -= it->second[i].coeff(nu - k);
                }
                worst = std::max(worst, std::abs(r));
            }
        }
    }
    return worst / scale;
}

// Max coefficient of (y+g)^r - y^r over retained orders, relative to the
// largest retained coefficient; near zero exactly when H5 holds.
inline double check_monomial_preservation(const NormalizationResult& res, const MultiIndex& r) {
    const int n = res.spec.n, M = res.M;
    if (r.dim() != n) throw structural_error("check_monomial_preservation: r dimension mismatch");
    ZSeriesRing ring(M);
    auto Y = detail::y_tables_z(res, res.N, M);
    ScalarTable<ZSeriesRing> prod;
    prod.emplace(MultiIndex::zero(n), ring.one());
    for (int l = 0; l < n; ++l)
        for (int rep = 0; rep < r[l]; ++rep) prod = table_mul(ring, prod, Y[l], res.N);

    double scale = std::max(1.0, res.table_max_abs());
    for (const auto& [Q, s] : prod) scale = std::max(scale, s.max_abs());
    double worst = 0.0;
    for (const auto& [Q, s] : prod) {
        ZSeries d = s;
        if (Q == r) d.set_coeff(0, d.coeff(0) - 1.0);
        worst = std::max(worst, d.max_abs());
    }
    return worst / scale;
}

// (sigma_k phi)(z) = phi(z^{1/k}): divide every exponent by k. Errors if a
// nonzero coefficient sits on an exponent not divisible by k.
inline ZSeries ramify_sigma_k(const ZSeries& s, int k) {
    if (k < 1) throw precondition_error("ramify_sigma_k: k must be >= 1");
    if (k == 1) return s;
    ZSeries out = ZSeries::zero(s.trunc_order() / k);
    for (int j = 0; j <= s.trunc_order(); ++j) {
        cplx v = s.coeff(j);
        if (v == cplx(0.0)) continue;
        if (j % k != 0)
            throw precondition_error("ramify_sigma_k: exponent " + std::to_string(j) +
                                     " not divisible by k=" + std::to_string(k));
        out.set_coeff(j / k, v);
    }
    return out;
}

}  // namespace gevreylab

#endif
