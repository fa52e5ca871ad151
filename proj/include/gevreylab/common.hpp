#ifndef GEVREYLAB_COMMON_HPP
#define GEVREYLAB_COMMON_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gevreylab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

inline bool is_finite(cplx v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

// Shared default tolerances. eps_res doubles as the zero-divisor exclusion
// threshold in the small-divisor scans so both modules agree on "resonant".
struct Tolerances {
    double eps_res = 1e-10;      // resonance detection |(Q,lambda)-lambda_i| < eps_res
    double rel_cmp = 1e-10;      // relative coefficient comparisons
    double h3_integer = 1e-8;    // |value - nearest nonnegative integer| threshold
    double divisor = 1e-12;      // hard zero-divisor guard in recurrences
};

struct structural_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Recurrence divisor hit zero: component i (1-based), multiindex Q, z-order n.
struct solve_error : std::runtime_error {
    int i;
    std::vector<int> Q;
    int n;
    solve_error(const std::string& msg, int i_, std::vector<int> Q_, int n_)
        : std::runtime_error(msg), i(i_), Q(std::move(Q_)), n(n_) {}
};

struct hypothesis_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct fit_domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct summation_error : std::runtime_error {
    enum class Kind { decay, pole };
    Kind kind;
    cplx pole;  // meaningful for Kind::pole
    summation_error(const std::string& msg, Kind k, cplx p = {})
        : std::runtime_error(msg), kind(k), pole(p) {}
};

// GEVREYLAB_THREADS caps worker threads; unset -> hardware_concurrency (max 8).
inline unsigned thread_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    unsigned cap = std::min(hw, 8u);
    if (const char* env = std::getenv("GEVREYLAB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) cap = static_cast<unsigned>(std::min<long>(v, 64));
    }
    return cap;
}

// Block-partitioned parallel loop. Deterministic as long as iterations write
// disjoint slots or reduce with exact operations (min over doubles).
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    unsigned nt = thread_count();
    if (nt <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    nt = static_cast<unsigned>(std::min<std::size_t>(nt, count));
    std::vector<std::thread> workers;
    workers.reserve(nt);
    std::size_t chunk = (count + nt - 1) / nt;
    for (unsigned w = 0; w < nt; ++w) {
        std::size_t lo = w * chunk, hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : workers) t.join();
}

}  // namespace gevreylab

#endif
