#ifndef GEVREYLAB_BOREL_PLANE_HPP
#define GEVREYLAB_BOREL_PLANE_HPP

#include "gevreylab/normalization.hpp"

namespace gevreylab {

namespace detail {

// Order-1 formal Borel of a z-series with the constant term split off:
// returns the unitized convolution-algebra element (f(0), B(f - f(0))).
inline BorelElem borel1_elem(const ZSeries& f, int max_order) {
    int T = std::min(max_order, std::max(0, f.trunc_order() - 1));
    std::vector<cplx> c(T + 1, cplx(0.0));
    double lg = 0.0;  // ln (nu-1)!
    for (int nu = 1; nu <= f.trunc_order() && nu - 1 <= T; ++nu) {
        if (nu >= 3) lg += std::log(double(nu - 1));
        c[nu - 1] = f.coeff(nu) * std::exp(-lg);
    }
    return {f.coeff(0), BorelSeries(1, std::move(c), 1)};
}

// sigma_k-reduced f images for the Borel-plane assembly.
inline std::map<MultiIndex, std::vector<BorelElem>, GradedLexLess>
f_images_borel(const VectorFieldSpec& spec, int t_base) {
    std::map<MultiIndex, std::vector<BorelElem>, GradedLexLess> out;
    for (const auto& [j, comps] : spec.f) {
        std::vector<BorelElem> v;
        v.reserve(spec.n);
        for (const auto& s : comps) v.push_back(borel1_elem(ramify_sigma_k(s, spec.k), t_base));
        out.emplace(j, std::move(v));
    }
    return out;
}

// Substituted-variable tables built from the W entries of degree < deg_cap.
inline std::vector<ScalarTable<ConvRing>>
y_tables_borel(const NormalizationResult& res, int deg_cap, const ConvRing& ring) {
    std::vector<ScalarTable<ConvRing>> Y(res.spec.n);
    for (const auto& [P, comps] : res.W) {
        if (P.degree() > deg_cap) continue;
        for (int l = 0; l < res.spec.n; ++l) {
            if (comps[l].valuation() > comps[l].trunc_order()) continue;
            Y[l].emplace(P, BorelElem{cplx(0.0), comps[l]});
        }
    }
    return Y;
}

// Solve (kt + lambda_Q) W' + (k + beta_Q) W = U coefficientwise:
//   lambda_Q (mu+1) W_{mu+1} + (k mu + k + beta_Q) W_mu = U_mu.
// Resonant zero divisors with exactly-zero right-hand side (below the
// lemma-1 valuation) give W_mu = 0; otherwise H3 is violated.
inline BorelSeries solve_WQ_ode(cplx lambda_Q, cplx beta_Q, const BorelSeries& U, int k,
                                int order, const Tolerances& tol, int ctx_i,
                                const MultiIndex& ctx_Q) {
    BorelSeries W = BorelSeries::zero(1, order);
    if (std::abs(lambda_Q) <= tol.eps_res) {
        for (int mu = 0; mu <= order; ++mu) {
            cplx div = double(k * mu + k) + beta_Q;
            cplx rhs = U.coeff(mu);
            if (std::abs(div) < tol.divisor) {
                if (rhs == cplx(0.0)) continue;
                throw solve_error("zero divisor in Borel recurrence at (i=" + std::to_string(ctx_i) +
                                      ", Q=" + ctx_Q.str() + ", mu=" + std::to_string(mu) +
                                      "): H3 violated",
                                  ctx_i, ctx_Q.entries(), mu);
            }
            W.set_coeff(mu, rhs / div);
        }
    } else {
        for (int mu = 0; mu < order; ++mu) {
            cplx num = U.coeff(mu) - (double(k * mu + k) + beta_Q) * W.coeff(mu);
            W.set_coeff(mu + 1, num / (lambda_Q * double(mu + 1)));
        }
    }
    return W;
}

// G = d^m/dt^m W by exact coefficient shift; for k > 1 the result is mapped
// back through t -> t^k (stride-k coefficients).
inline BorelSeries derivative_shift(const BorelSeries& W, int m, int k, int g_order) {
    std::vector<cplx> g1(g_order + 1, cplx(0.0));
    for (int mu = 0; mu <= g_order; ++mu) {
        if (mu + m > W.trunc_order()) break;
        double fall = 1.0;  // (mu+m)!/mu!
        for (int j = mu + 1; j <= mu + m; ++j) fall *= double(j);
        g1[mu] = W.coeff(mu + m) * fall;
    }
    if (k == 1) return BorelSeries(1, std::move(g1), 1);
    std::vector<cplx> strided(k * g_order + 1, cplx(0.0));
    for (int mu = 0; mu <= g_order; ++mu) strided[k * mu] = g1[mu];
    return BorelSeries(k, std::move(strided), k);
}

}  // namespace detail

// Borel-plane recurrence for one shell: U_Q from the convolution product
// formula, W_Q from the transported ODE, G_Q as the m-th derivative of W_Q.
// Fills res.W/U/G for all |Q| = m; lower shells must already be present.
inline void borel_shell(NormalizationResult& res, int m) {
    const int n = res.spec.n, k = res.spec.k;
    const int t_base = (k == 1) ? res.M : res.M / k;
    if (m == 1) {
        for (int l = 0; l < n; ++l) {
            MultiIndex e = MultiIndex::unit(n, l);
            NormalizationResult::VecB Wrow, Urow, Grow;
            for (int i = 0; i < n; ++i) {
                BorelSeries ws = BorelSeries::zero(1, t_base);
                if (i == l) ws.set_coeff(0, 1.0);  // W_{e_l} = e_l
                Wrow.push_back(ws);
                Urow.push_back(BorelSeries::zero(1, t_base));
                Grow.push_back(detail::derivative_shift(Wrow.back(), 1, k, t_base - 1));
            }
            res.W.emplace(e, std::move(Wrow));
            res.U.emplace(e, std::move(Urow));
            res.G.emplace(e, std::move(Grow));
        }
        res.borel_degree = std::max(res.borel_degree, 1);
        return;
    }
    for (int d = 1; d < m; ++d) {
        std::size_t have = 0;
        for (const auto& [P, comps] : res.W)
            if (P.degree() == d) ++have;
        if (double(have) != count_degree(n, d))
            throw structural_error("borel_shell: missing W entries at degree " + std::to_string(d));
    }

    const int order_m = t_base + m - 1;  // validity of shell-m series
    ConvRing ring(t_base + m);
    auto Y = detail::y_tables_borel(res, m - 1, ring);
    auto rhs = assemble_rhs(ring, n, detail::f_images_borel(res.spec, t_base), Y, m);

    std::vector<MultiIndex> shell;
    for_each_degree(n, m, [&](const MultiIndex& Q) { shell.push_back(Q); });
    std::vector<NormalizationResult::VecB> Wv(shell.size()), Uv(shell.size()), Gv(shell.size());
    std::exception_ptr first_err;
    std::mutex err_mutex;
    parallel_for(shell.size(), [&](std::size_t idx) {
        try {
            const MultiIndex& Q = shell[idx];
            auto it = rhs.find(Q);
            for (int i = 0; i < n; ++i) {
                BorelSeries Uq = BorelSeries::zero(1, order_m);
                if (it != rhs.end()) {
                    const BorelElem& e = it->second[i];
                    // u_Q has positive valuation, so no delta part survives
                    Uq = e.tail.truncated(order_m);
                }
                BorelSeries Wq = detail::solve_WQ_ode(res.lambda_Q(Q, i), res.beta_Q(Q, i), Uq, k,
                                                      order_m, res.spec.tol, i + 1, Q);
                Uv[idx].push_back(Uq);
                Gv[idx].push_back(detail::derivative_shift(Wq, m, k, t_base - 1));
                Wv[idx].push_back(std::move(Wq));
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_err) first_err = std::current_exception();
        }
    });
    if (first_err) std::rethrow_exception(first_err);

    for (std::size_t idx = 0; idx < shell.size(); ++idx) {
        res.U.emplace(shell[idx], std::move(Uv[idx]));
        res.W.emplace(shell[idx], std::move(Wv[idx]));
        res.G.emplace(shell[idx], std::move(Gv[idx]));
    }
    res.borel_degree = std::max(res.borel_degree, m);
}

// Public per-Q entry point: ensures the shell of |Q| is computed and returns
// the (U_Q, W_Q, G_Q) truncations.
struct BorelTriple {
    NormalizationResult::VecB U, W, G;
};

inline BorelTriple borel_recurrence(NormalizationResult& res, const MultiIndex& Q) {
    int m = Q.degree();
    if (m < 1) throw precondition_error("borel_recurrence: |Q| must be >= 1");
    for (int d = res.borel_degree + 1; d <= m; ++d) borel_shell(res, d);
    return {res.U.at(Q), res.W.at(Q), res.G.at(Q)};
}

inline void compute_borel_tables(NormalizationResult& res, int max_degree) {
    for (int d = res.borel_degree + 1; d <= std::min(max_degree, res.N); ++d) borel_shell(res, d);
}

// Coefficientwise defect between the two routes to G_Q: the order-k formal
// Borel of the z-plane g_Q versus the t-plane recurrence result. Relative to
// the largest coefficient of either route per (i, Q).
inline double route_equivalence_defect(const NormalizationResult& res, int max_degree) {
    const int k = res.spec.k;
    double worst = 0.0;
    for (const auto& [Q, Grow] : res.G) {
        if (Q.degree() > max_degree) continue;
        for (int i = 0; i < res.spec.n; ++i) {
            const ZSeries& gq = res.g.at(Q)[i];
            const BorelSeries& Gt = Grow[i];
            // direct route: z^nu -> t^{nu-k} / Gamma(nu/k), constant term dropped
            std::vector<cplx> direct(Gt.trunc_order() + 1, cplx(0.0));
            for (int mu = 0; mu <= Gt.trunc_order(); ++mu) {
                int nu = mu + k;
                if (nu <= gq.trunc_order() && (k == 1 || mu % k == 0))
                    direct[mu] = gq.coeff(nu) / std::tgamma(double(nu) / double(k));
            }
            double scale = Gt.max_abs();
            for (cplx v : direct) scale = std::max(scale, std::abs(v));
            if (scale == 0.0) continue;
            double local = 0.0;
            for (int mu = 0; mu <= Gt.trunc_order(); ++mu)
                local = std::max(local, std::abs(direct[mu] - Gt.coeff(mu)));
            worst = std::max(worst, local / scale);
        }
    }
    return worst;
}

struct GridSpec {
    int radii = 6;
    int angles = 12;
};

struct BoundFit {
    double K0_fit = 1.0;    // smallest K0 with |W_Q(t)| <= K0^m R_m(t) on the samples
    double K_fit = 1.0;     // smallest K with |G_Q(t)| <= K^m on the samples
    double c0_used = 0.5;
    std::string grid;
};

// Evaluate the truncated Borel tables on shrinking disks |t| <= c0 * c m^-gamma
// (and |t| <= (c m^-gamma)/2 for G) and fit the minimal growth constants.
// c0 starts at 0.5 and halves until Re((1+pt)/(1+t)) > 0 holds on the disk for
// every |p| up to the table bound, the property the paper requires of c0.
inline BoundFit verify_bounds(const NormalizationResult& res, double c, double gamma,
                              GridSpec grid = {}) {
    if (res.borel_degree < 1) throw precondition_error("verify_bounds: Borel tables not computed");
    const int k = res.spec.k;
    BoundFit fit;

    double p_bound = 1.0;
    for (const auto& [Q, comps] : res.W) {
        int m = Q.degree();
        for (int l = 0; l < res.spec.n; ++l)
            p_bound = std::max(p_bound, std::abs(res.alpha_Q(Q, l)) / double(m));
    }
    double c0 = 0.5;
    for (;;) {
        // min over the disk of Re(1/(1+t)) - p_bound |t/(1+t)|, on a grid
        double mn = std::numeric_limits<double>::infinity();
        for (int a = 0; a < grid.angles; ++a) {
            double th = 2.0 * kPi * double(a) / double(grid.angles);
            for (int rr = 1; rr <= grid.radii; ++rr) {
                cplx t = std::polar(c0 * double(rr) / double(grid.radii), th);
                cplx den = 1.0 + t;
                mn = std::min(mn, (1.0 / den).real() - p_bound * std::abs(t / den));
            }
        }
        if (mn > 0.0 || c0 < 1e-6) break;
        c0 *= 0.5;
    }
    fit.c0_used = c0;

    for (const auto& [Q, Wrow] : res.W) {
        int m = Q.degree();
        double rho_m = c * std::pow(double(m), -gamma);
        double rad_W = c0 * rho_m / double(k);
        double rad_G = (k == 1) ? rho_m / 2.0 : std::pow(rho_m / (2.0 * k), 1.0 / double(k));
        const auto& Grow = res.G.at(Q);
        for (int i = 0; i < res.spec.n; ++i) {
            for (int a = 0; a < grid.angles; ++a) {
                double th = 2.0 * kPi * double(a) / double(grid.angles);
                for (int rr = 1; rr <= grid.radii; ++rr) {
                    cplx tW = std::polar(rad_W * double(rr) / double(grid.radii), th);
                    double WV = std::abs(Wrow[i].eval(tW));
                    if (WV > 0.0) {
                        // R_m(t) = |t|^{m-1}/(m-1)!
                        double lr = double(m - 1) * std::log(std::abs(tW)) - std::lgamma(double(m));
                        double ratio = std::exp((std::log(WV) - lr) / double(m));
                        fit.K0_fit = std::max(fit.K0_fit, ratio);
                    }
                    cplx tG = std::polar(rad_G * double(rr) / double(grid.radii), th);
                    double GV = std::abs(Grow[i].eval(tG));
                    if (GV > 0.0)
                        fit.K_fit = std::max(fit.K_fit, std::exp(std::log(GV) / double(m)));
                }
            }
        }
    }
    fit.grid = std::to_string(grid.radii) + " radii x " + std::to_string(grid.angles) +
               " angles per disk, degrees 1.." + std::to_string(res.borel_degree);
    return fit;
}

}  // namespace gevreylab

#endif
