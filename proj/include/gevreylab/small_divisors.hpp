#ifndef GEVREYLAB_SMALL_DIVISORS_HPP
#define GEVREYLAB_SMALL_DIVISORS_HPP

#include <atomic>

#include "gevreylab/resonance.hpp"

namespace gevreylab {

namespace detail {

// Minimum of |(P,lambda)-lambda_j| over a single degree shell |P| = m,
// excluding values <= eps (the shared "resonant" notion). Returns +inf if
// the shell contributes nothing.
inline double shell_min_divisor(const LinearPart& lp, int m, double eps,
                                const std::optional<std::pair<std::vector<long long>, long long>>& exact) {
    double best = std::numeric_limits<double>::infinity();
    if (exact) {
        const auto& num = exact->first;
        double den = double(exact->second);
        for_each_degree(lp.n, m, [&](const MultiIndex& P) {
            long long acc = 0;
            for (int l = 0; l < lp.n; ++l) acc += static_cast<long long>(P[l]) * num[l];
            for (int j = 0; j < lp.n; ++j) {
                double v = std::abs(double(acc - num[j])) / den;
                if (v > eps && v < best) best = v;
            }
        });
    } else {
        for_each_degree(lp.n, m, [&](const MultiIndex& P) {
            cplx s = 0.0;
            for (int l = 0; l < lp.n; ++l) s += double(P[l]) * lp.lambda[l];
            for (int j = 0; j < lp.n; ++j) {
                double v = std::abs(s - lp.lambda[j]);
                if (v > eps && v < best) best = v;
            }
        });
    }
    return best;
}

// Total number of multiindices in degrees [lo, hi].
inline double shell_count(int n, int lo, int hi) {
    double total = 0.0;
    for (int m = lo; m <= hi; ++m) total += count_degree(n, m);
    return total;
}

}  // namespace detail

struct OmegaResult {
    std::vector<double> omega;  // omega[k-1] = omega_k, k = 1..K
    bool budget_exceeded = false;
    int completed_K = 0;
};

// omega_k = min{ |(Q,lambda)-lambda_i| != 0 : 2 <= |Q| <= 2^k }.
inline OmegaResult omega_sequence(const LinearPart& lp, int K, double eps,
                                  double budget = 1e8) {
    if (K < 1) throw precondition_error("omega_sequence: K must be >= 1");
    if (eps <= 0.0) throw precondition_error("omega_sequence: eps must be > 0");
    OmegaResult out;
    int usable_K = K;
    while (usable_K > 1 && detail::shell_count(lp.n, 2, 1 << usable_K) > budget) --usable_K;
    out.budget_exceeded = usable_K < K;
    out.completed_K = usable_K;

    int max_deg = 1 << usable_K;
    std::vector<double> degree_min(max_deg + 1, std::numeric_limits<double>::infinity());
    auto exact = lp.rational_numerators();
    parallel_for(static_cast<std::size_t>(max_deg - 1), [&](std::size_t idx) {
        int m = static_cast<int>(idx) + 2;
        degree_min[m] = detail::shell_min_divisor(lp, m, eps, exact);
    });
    double run = std::numeric_limits<double>::infinity();
    int deg = 2;
    for (int k = 1; k <= usable_K; ++k) {
        for (; deg <= (1 << k); ++deg) run = std::min(run, degree_min[deg]);
        out.omega.push_back(run);
    }
    return out;
}

// Partial sums S_K = -sum_{k=0}^{K-1} ln(omega_{k+1}) / 2^k.
inline std::vector<double> bruno_sum(const std::vector<double>& omega) {
    for (double w : omega)
        if (!(w > 0.0)) throw precondition_error("bruno_sum: omega entries must be positive");
    std::vector<double> sums;
    double acc = 0.0;
    for (std::size_t k = 0; k < omega.size(); ++k) {
        acc -= std::log(omega[k]) / std::ldexp(1.0, static_cast<int>(k));
        sums.push_back(acc);
    }
    return sums;
}

struct RhoResult {
    int first_m = 1;            // smallest degree included (the |P| >= 2 variant uses 2)
    std::vector<double> rho;    // rho[m - first_m] = rho_m
    bool budget_exceeded = false;

    double value(int m) const {
        if (m < first_m || m >= first_m + static_cast<int>(rho.size()))
            throw precondition_error("RhoResult::value: m out of range");
        return rho[m - first_m];
    }
    int last_m() const { return first_m + static_cast<int>(rho.size()) - 1; }
};

// rho_m = min{ |(P,lambda)-lambda_j| : min_degree <= |P| <= m, value > eps }.
inline RhoResult rho_sequence(const LinearPart& lp, int m_max, double eps,
                              int min_degree = 1, double budget = 1e8) {
    if (m_max < 1) throw precondition_error("rho_sequence: m_max must be >= 1");
    if (min_degree < 1 || min_degree > m_max)
        throw precondition_error("rho_sequence: invalid min_degree");
    RhoResult out;
    out.first_m = min_degree;
    int usable = m_max;
    while (usable > min_degree && detail::shell_count(lp.n, min_degree, usable) > budget) --usable;
    out.budget_exceeded = usable < m_max;

    std::vector<double> degree_min(usable + 1, std::numeric_limits<double>::infinity());
    auto exact = lp.rational_numerators();
    parallel_for(static_cast<std::size_t>(usable - min_degree + 1), [&](std::size_t idx) {
        int m = min_degree + static_cast<int>(idx);
        degree_min[m] = detail::shell_min_divisor(lp, m, eps, exact);
    });
    double run = std::numeric_limits<double>::infinity();
    for (int m = min_degree; m <= usable; ++m) {
        run = std::min(run, degree_min[m]);
        out.rho.push_back(run);
    }
    return out;
}

struct DiophantineFit {
    double c = 0.0;
    double gamma = 0.0;
    double residual = 0.0;
    int records_used = 0;
    bool insufficient = false;  // fewer than 3 decay records in the window
};

// Least-squares fit ln rho_m ~ ln c - gamma ln m over the decay records
// (indices where rho strictly decreases; plateaus would bias gamma to 0).
inline DiophantineFit fit_diophantine_type(const RhoResult& rho, int window_lo, int window_hi) {
    if (window_lo < rho.first_m || window_hi > rho.last_m() || window_lo > window_hi)
        throw precondition_error("fit_diophantine_type: window outside sequence");
    for (double v : rho.rho)
        if (!(v > 0.0) || !std::isfinite(v))
            throw precondition_error("fit_diophantine_type: rho entries must be positive finite");

    std::vector<std::pair<int, double>> records;
    double prev = std::numeric_limits<double>::infinity();
    for (int m = rho.first_m; m <= rho.last_m(); ++m) {
        double v = rho.value(m);
        if (v < prev) {
            if (m >= window_lo && m <= window_hi) records.emplace_back(m, v);
            prev = v;
        }
    }

    DiophantineFit fit;
    fit.records_used = static_cast<int>(records.size());
    if (records.size() < 3) {
        fit.insufficient = true;
        fit.gamma = 0.0;
        double mn = std::numeric_limits<double>::infinity();
        for (int m = window_lo; m <= window_hi; ++m) mn = std::min(mn, rho.value(m));
        fit.c = mn;
        return fit;
    }
    // normal equations for y = a - gamma * x, x = ln m, y = ln rho
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [m, v] : records) {
        double x = std::log(double(m)), y = std::log(v);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double nrec = double(records.size());
    double denom = nrec * sxx - sx * sx;
    double slope = (nrec * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / nrec;
    fit.gamma = std::max(0.0, -slope);
    fit.c = std::exp(intercept);
    double ss = 0.0;
    for (auto [m, v] : records) {
        double pred = intercept + slope * std::log(double(m));
        double d = std::log(v) - pred;
        ss += d * d;
    }
    fit.residual = std::sqrt(ss / nrec);
    return fit;
}

struct SmallDivisorProfile {
    OmegaResult omega;
    std::vector<double> bruno_partial_sums;
    RhoResult rho;
    DiophantineFit fit;
    int bruno_K = 0;
    int m_max = 0;
};

inline SmallDivisorProfile small_divisor_profile(const LinearPart& lp, int bruno_K, int m_max,
                                                 double eps, int min_degree = 1,
                                                 int fit_lo = 2, int fit_hi = -1,
                                                 double budget = 1e8) {
    SmallDivisorProfile prof;
    prof.bruno_K = bruno_K;
    prof.m_max = m_max;
    prof.omega = omega_sequence(lp, bruno_K, eps, budget);
    prof.bruno_partial_sums = bruno_sum(prof.omega.omega);
    prof.rho = rho_sequence(lp, m_max, eps, min_degree, budget);
    if (fit_hi < 0) fit_hi = prof.rho.last_m();
    fit_lo = std::max(fit_lo, prof.rho.first_m);
    prof.fit = fit_diophantine_type(prof.rho, fit_lo, fit_hi);
    return prof;
}

}  // namespace gevreylab

#endif
