#ifndef GEVREYLAB_BOREL_LAPLACE_HPP
#define GEVREYLAB_BOREL_LAPLACE_HPP

#include "gevreylab/pade.hpp"
#include "gevreylab/quadrature.hpp"
#include "gevreylab/z_series.hpp"

namespace gevreylab {

// Sector with vertex at the origin: |arg z - direction| <= half_opening,
// 0 < |z| <= radius.
struct SectorSpec {
    double direction = 0.0;
    double half_opening = kPi / 4.0;
    double radius = 1.0;

    SectorSpec() = default;
    SectorSpec(double d, double half, double rad) : direction(d), half_opening(half), radius(rad) {
        if (!(half_opening > 0.0) || half_opening >= kPi)
            throw structural_error("SectorSpec: half opening must lie in (0, pi)");
        if (!(radius > 0.0)) throw structural_error("SectorSpec: radius must be positive");
    }

    bool contains(cplx z) const {
        if (z == cplx(0.0) || std::abs(z) > radius) return false;
        double a = std::arg(z * std::polar(1.0, -direction));
        return std::abs(a) <= half_opening;
    }
    std::vector<cplx> sample_points(int n_radial, int n_angular) const {
        std::vector<cplx> pts;
        for (int a = 0; a < n_angular; ++a) {
            double th = direction - half_opening +
                        2.0 * half_opening * (n_angular == 1 ? 0.5 : double(a) / double(n_angular - 1));
            for (int r = 1; r <= n_radial; ++r)
                pts.push_back(std::polar(radius * double(r) / double(n_radial), th));
        }
        return pts;
    }
};

// Formal Borel transform of order k: z^nu -> t^{nu-k} / Gamma(nu/k).
inline BorelSeries borel_k_formal(const ZSeries& f, int k) {
    if (k < 1) throw precondition_error("borel_k_formal: k must be >= 1");
    if (!f.is_zero() && f.valuation() < k)
        throw precondition_error("borel_k_formal: source valuation " +
                                 std::to_string(f.valuation()) + " below k=" + std::to_string(k));
    int T = f.trunc_order() - k;
    if (T < 0) return BorelSeries::zero(k, 0);
    std::vector<cplx> out(T + 1, cplx(0.0));
    for (int nu = k; nu <= f.trunc_order(); ++nu)
        out[nu - k] = f.coeff(nu) / std::tgamma(double(nu) / double(k));
    return BorelSeries(k, std::move(out), k);
}

struct LaplaceResult {
    cplx value = 0.0;
    double error_estimate = 0.0;  // quadrature estimate plus tail bound
    int panels = 0;
    double truncation_radius = 0.0;
};

// Laplace transform of order k along the ray arg t = d:
//   L_k F (z) = int_0^{inf e^{id}} F(t) e^{-(t/z)^k} d(t^k),
// parameterized by t = v e^{id} so the integrand stays smooth at v = 0.
// Requires the decay condition Re((e^{id}/z)^k) > 0.
template <typename Cont>
LaplaceResult laplace_k_numeric_fn(Cont&& F, int k, double d, cplx z, double tol_abs = 1e-11) {
    if (k < 1) throw precondition_error("laplace_k_numeric: k must be >= 1");
    if (z == cplx(0.0))
        throw summation_error("laplace_k_numeric: z = 0", summation_error::Kind::decay);
    cplx eid = std::polar(1.0, d);
    cplx w = std::pow(eid / z, k);
    double a = w.real();
    if (!(a > 0.0))
        throw summation_error(
            "z outside summation sector: Re((e^{id}/z)^k) = " + std::to_string(a) + " <= 0",
            summation_error::Kind::decay);

    // truncation point: double V until the crude tail bound |F| e^{-aV^k}/a
    // is far below tolerance
    double V = std::pow(38.0 / a, 1.0 / double(k));
    double tail = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        tail = std::abs(F(V * eid)) * std::exp(-a * std::pow(V, k)) / a;
        if (tail < 0.05 * tol_abs || !std::isfinite(tail)) break;
        V *= 1.5;
    }
    if (!std::isfinite(tail)) tail = 0.0;  // continuation blew up past all data; report via estimate

    cplx phase = std::pow(eid, k);
    auto integrand = [&](double v) -> cplx {
        cplx t = v * eid;
        return F(t) * std::exp(-w * std::pow(v, k)) * double(k) * std::pow(v, k - 1) * phase;
    };
    QuadResult q = gk15_adaptive(integrand, 0.0, V, tol_abs);
    return {q.value, q.error_estimate + tail, q.panels, V};
}

inline LaplaceResult laplace_k_numeric(const PadeApproximant& cont, int k, double d, cplx z,
                                       double tol_abs = 1e-11) {
    return laplace_k_numeric_fn([&cont](cplx t) { return cont.eval(t); }, k, d, z, tol_abs);
}

struct BorelSumResult {
    cplx value = 0.0;
    double error_estimate = 0.0;
    PadeApproximant pade;
};

// k-sum evaluation: formal Borel, Padé continuation, Laplace along d.
// pade_L/pade_M < 0 selects the diagonal [T/2 / T/2] default. The ray must
// clear every genuine pole by clearance_factor * |pole|.
inline BorelSumResult borel_sum(const ZSeries& f, int k, double d, cplx z, int pade_L = -1,
                                int pade_M = -1, double tol_abs = 1e-11,
                                double clearance_factor = 0.1) {
    BorelSeries B = borel_k_formal(f, k);
    int T = B.trunc_order();
    if (pade_L < 0 || pade_M < 0) {
        pade_L = T / 2;
        pade_M = T - pade_L;  // L + M = T
    }
    BorelSumResult out;
    out.pade = pade_continue(B, pade_L, pade_M);
    for (cplx p : out.pade.poles) {
        cplx e = std::polar(1.0, d);
        double s = std::max(0.0, (p * std::conj(e)).real());
        double dist = std::abs(p - s * e);
        if (dist < clearance_factor * std::abs(p))
            throw summation_error("summation ray arg t = " + std::to_string(d) +
                                      " blocked by Borel-plane pole at (" + std::to_string(p.real()) +
                                      ", " + std::to_string(p.imag()) + ")",
                                  summation_error::Kind::pole, p);
    }
    LaplaceResult lr = laplace_k_numeric(out.pade, k, d, z, tol_abs);
    out.value = lr.value;
    out.error_estimate = lr.error_estimate;
    return out;
}

// Empirical Gevrey remainder table: r_N = max over samples of
// |g(z) - sum_{j<N} ghat_j z^j| / |z|^N, N = 1..N_max.
template <typename Sampler>
std::vector<double> asymptotic_residual_scan(Sampler&& g, const ZSeries& ghat,
                                             const std::vector<cplx>& samples, int N_max) {
    std::vector<double> out;
    for (int N = 1; N <= N_max; ++N) {
        double worst = 0.0;
        for (cplx z : samples) {
            cplx jet = 0.0;
            for (int j = N - 1; j >= 0; --j) jet = jet * z + ghat.coeff(j);
            worst = std::max(worst, std::abs(g(z) - jet) / std::pow(std::abs(z), N));
        }
        out.push_back(worst);
    }
    return out;
}

struct PowerSumBound {
    double C3 = 0.0;
    double C4 = 0.0;
    bool holds = false;      // S(mu) <= C3 C4^mu Gamma(mu) for every scanned mu
    double worst_slack = 0;  // min over mu of bound/S ( >= 1 when holds)
};

// Desk-scale fit of  sum_{m<=m_max} m^mu x^m <= C3 C4^mu Gamma(mu), x = 1-delta,
// with (C3, C4) independent of mu: least squares in log space, then C3 inflated
// to cover the worst mu.
inline PowerSumBound fit_power_sum_bound(double delta, int mu_max, int m_max) {
    if (!(delta > 0.0) || delta >= 1.0) throw precondition_error("fit_power_sum_bound: delta in (0,1)");
    double x = 1.0 - delta;
    std::vector<double> y(mu_max + 1, 0.0);
    for (int mu = 1; mu <= mu_max; ++mu) {
        double s = 0.0;
        for (int m = 1; m <= m_max; ++m) s += std::pow(double(m), mu) * std::pow(x, m);
        y[mu] = std::log(s) - std::lgamma(double(mu));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int mu = 1; mu <= mu_max; ++mu) {
        sx += mu; sy += y[mu]; sxx += double(mu) * mu; sxy += mu * y[mu];
    }
    double nn = double(mu_max);
    double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    double icept = (sy - slope * sx) / nn;
    double bump = 0.0;
    for (int mu = 1; mu <= mu_max; ++mu) bump = std::max(bump, y[mu] - (icept + slope * mu));
    PowerSumBound out;
    out.C4 = std::exp(slope);
    out.C3 = std::exp(icept + bump) * (1.0 + 1e-12);
    out.holds = true;
    out.worst_slack = std::numeric_limits<double>::infinity();
    for (int mu = 1; mu <= mu_max; ++mu) {
        double bound_log = std::log(out.C3) + mu * slope + std::lgamma(double(mu));
        double slack = std::exp(bound_log - y[mu] - std::lgamma(double(mu)));
        out.worst_slack = std::min(out.worst_slack, slack);
        if (bound_log < y[mu] + std::lgamma(double(mu))) out.holds = false;
    }
    return out;
}

}  // namespace gevreylab

#endif
