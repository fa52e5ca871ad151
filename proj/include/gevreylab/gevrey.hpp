#ifndef GEVREYLAB_GEVREY_HPP
#define GEVREYLAB_GEVREY_HPP

#include "gevreylab/normalization.hpp"

namespace gevreylab {

struct GevreyFit {
    double s_hat = 0.0;
    double A_hat = 1.0;
    double C_hat = 0.0;
    double residual = 0.0;  // RMS of the log fit
    int window_lo = 0;
    int window_hi = 0;
    int usable_points = 0;
    bool low_confidence = false;
};

namespace detail {

// For fixed s, the model ln|f_N| = ln C + N ln A + ln Gamma(1+Ns) is linear in
// (ln C, ln A); returns the RMS residual and the minimizer.
inline double gevrey_inner_fit(const std::vector<std::pair<int, double>>& pts, double s,
                               double* lnC, double* lnA) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [N, lnh] : pts) {
        double y = lnh - std::lgamma(1.0 + N * s);
        sx += N; sy += y; sxx += double(N) * N; sxy += double(N) * y;
    }
    double nn = double(pts.size());
    double denom = nn * sxx - sx * sx;
    double a = 0.0, c = sy / nn;  // slope, intercept
    if (denom > 0.0) {
        a = (nn * sxy - sx * sy) / denom;
        c = (sy - a * sx) / nn;
    }
    double ss = 0.0;
    for (auto [N, lnh] : pts) {
        double y = lnh - std::lgamma(1.0 + N * s);
        double d = y - (c + a * N);
        ss += d * d;
    }
    if (lnC) *lnC = c;
    if (lnA) *lnA = a;
    return std::sqrt(ss / nn);
}

}  // namespace detail

// Fit |f_N| ~ C A^N Gamma(1+Ns): coarse scan plus golden-section refinement
// over s >= 0 with the inner linear solve for (C, A). Zero norms are skipped.
inline GevreyFit gevrey_fit(const std::vector<double>& norms, int window_lo, int window_hi,
                            double s_max = 4.0) {
    GevreyFit fit;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    std::vector<std::pair<int, double>> pts;
    for (int N = std::max(0, window_lo); N <= window_hi && N < static_cast<int>(norms.size()); ++N) {
        double v = norms[N];
        if (!(v > 0.0)) continue;
        if (!std::isfinite(v)) throw precondition_error("gevrey_fit: non-finite norm");
        pts.emplace_back(N, std::log(v));
    }
    fit.usable_points = static_cast<int>(pts.size());
    if (pts.size() < 5) fit.low_confidence = true;
    if (pts.size() < 2) return fit;  // s = 0, A = 1, C = 0 defaults

    const int coarse = 400;
    double best_s = 0.0, best_r = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= coarse; ++i) {
        double s = s_max * double(i) / double(coarse);
        double r = detail::gevrey_inner_fit(pts, s, nullptr, nullptr);
        if (r < best_r) { best_r = r; best_s = s; }
    }
    double lo = std::max(0.0, best_s - 2.0 * s_max / coarse);
    double hi = std::min(s_max, best_s + 2.0 * s_max / coarse);
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = detail::gevrey_inner_fit(pts, c, nullptr, nullptr);
    double fd = detail::gevrey_inner_fit(pts, d, nullptr, nullptr);
    for (int it = 0; it < 120; ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a);
            fc = detail::gevrey_inner_fit(pts, c, nullptr, nullptr);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a);
            fd = detail::gevrey_inner_fit(pts, d, nullptr, nullptr);
        }
    }
    double s = 0.5 * (a + b);
    double lnC = 0.0, lnA = 0.0;
    fit.residual = detail::gevrey_inner_fit(pts, s, &lnC, &lnA);
    fit.s_hat = s;
    fit.A_hat = std::exp(lnA);
    fit.C_hat = std::exp(lnC);
    return fit;
}

struct NormalizationGevrey {
    GevreyFit fit;
    std::vector<double> h;  // h_N = max_i sum_Q |g_{i,Q,N}| R^{|Q|}
    double R = 0.0;
};

// z-Taylor coefficient norms of g(z,y) on the polydisk of radius R, then the
// Gevrey fit; s_hat is to be compared against (1+gamma)/k. Detects a visibly
// divergent Q-sum (R too large) from increasing top degree-shell partial sums.
inline NormalizationGevrey gevrey_order_of_normalization(const NormalizationResult& res, double R,
                                                         int window_lo, int window_hi,
                                                         double s_max = 4.0) {
    if (!(R > 0.0)) throw precondition_error("gevrey_order_of_normalization: R must be > 0");
    NormalizationGevrey out;
    out.R = R;
    const int n = res.spec.n;
    out.h.assign(res.M + 1, 0.0);

    int divergent = 0, usable = 0;
    for (int N = 0; N <= res.M; ++N) {
        double best = 0.0;
        bool any = false;
        for (int i = 0; i < n; ++i) {
            std::vector<double> shell(res.N + 1, 0.0);
            for (const auto& [Q, comps] : res.g)
                shell[Q.degree()] += std::abs(comps[i].coeff(N)) * std::pow(R, Q.degree());
            double total = 0.0;
            for (double v : shell) total += v;
            best = std::max(best, total);
            if (total > 0.0) any = true;
            if (res.N >= 3 && shell[res.N] > 1.1 * shell[res.N - 1] &&
                shell[res.N - 1] > 1.1 * shell[res.N - 2] && shell[res.N] > 0.0)
                ++divergent;
        }
        if (any && N >= 1) ++usable;
        out.h[N] = best;
    }
    if (usable > 0 && divergent * 2 > usable * n)
        throw fit_domain_error("reduce R: degree-shell partial sums of the Q-sum are increasing at R=" +
                               std::to_string(R));

    if (window_hi < 0) window_hi = res.M;
    out.fit = gevrey_fit(out.h, window_lo, window_hi, s_max);
    return out;
}

}  // namespace gevreylab

#endif
