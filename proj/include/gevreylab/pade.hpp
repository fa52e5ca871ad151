#ifndef GEVREYLAB_PADE_HPP
#define GEVREYLAB_PADE_HPP

#include <Eigen/Dense>

#include "gevreylab/borel_series.hpp"

namespace gevreylab {

// [L/M] rational approximant of a truncated t-series, used as the analytic
// continuation device for the Laplace integrand. Denominator normalized to
// b_0 = 1. Poles are the denominator roots; near-cancelling pole/zero pairs
// (Froissart doublets from rank-deficient data) are filtered into `spurious`.
struct PadeApproximant {
    std::vector<cplx> num;
    std::vector<cplx> den;  // den[0] == 1
    int L = 0;
    int Mdeg = 0;
    std::vector<cplx> poles;
    std::vector<cplx> spurious;
    bool degree_reduced = false;  // rank deficiency forced a smaller Mdeg

    cplx eval(cplx t) const {
        cplx p = 0.0, q = 0.0;
        for (int j = static_cast<int>(num.size()) - 1; j >= 0; --j) p = p * t + num[j];
        for (int j = static_cast<int>(den.size()) - 1; j >= 0; --j) q = q * t + den[j];
        return p / q;
    }

    // Minimal distance from the ray arg t = d (t >= 0) to any genuine pole.
    double ray_clearance(double d, cplx* nearest = nullptr) const {
        double best = std::numeric_limits<double>::infinity();
        cplx e = std::polar(1.0, d);
        for (cplx p : poles) {
            double s = std::max(0.0, (p * std::conj(e)).real());
            double dist = std::abs(p - s * e);
            if (dist < best) {
                best = dist;
                if (nearest) *nearest = p;
            }
        }
        return best;
    }
};

namespace detail {

inline std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
    int deg = static_cast<int>(coeffs.size()) - 1;
    while (deg > 0 && std::abs(coeffs[deg]) == 0.0) --deg;
    if (deg < 1) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[i] / coeffs[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<cplx> roots(deg);
    for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(i);
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
        return std::arg(a) < std::arg(b);
    });
    return roots;
}

}  // namespace detail

// Padé via the Toeplitz least-squares system with SVD-based degree reduction:
// a numerically rank-deficient block (the series is already rational of lower
// type) retries with a smaller denominator degree instead of producing a
// singular solve.
inline PadeApproximant pade_continue(const BorelSeries& b, int L, int Mdeg) {
    if (L < 0 || Mdeg < 0) throw precondition_error("pade_continue: negative degrees");
    if (b.trunc_order() < L + Mdeg)
        throw precondition_error("pade_continue: need at least L+Mdeg+1 coefficients");

    PadeApproximant pa;
    pa.L = L;
    int M = Mdeg;
    const double rank_tol = 1e-12;
    std::vector<cplx> den;
    for (; M >= 1; --M) {
        // sum_{j=0..M} b_j c_{L+i-j} = 0, i = 1..M, with b_0 = 1:
        // A x = r, A_{i,j} = c_{L+1+i-j} (j = 1..M), r_i = -c_{L+1+i}.
        Eigen::MatrixXcd A(M, M);
        Eigen::VectorXcd r(M);
        for (int i = 0; i < M; ++i) {
            for (int j = 0; j < M; ++j) {
                int idx = L + 1 + i - (j + 1);
                A(i, j) = (idx >= 0) ? b.coeff(idx) : cplx(0.0);
            }
            r(i) = -b.coeff(L + 1 + i);
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        double smax = svd.singularValues()(0);
        double smin = svd.singularValues()(M - 1);
        if (smax == 0.0) {
            den.assign(1, cplx(1.0));  // zero data
            M = 0;
            break;
        }
        if (smin < rank_tol * smax) {
            pa.degree_reduced = true;
            continue;
        }
        Eigen::VectorXcd x = svd.solve(r);
        den.assign(M + 1, cplx(0.0));
        den[0] = 1.0;
        for (int j = 0; j < M; ++j) den[j + 1] = x(j);
        break;
    }
    if (M <= 0) {
        den.assign(1, cplx(1.0));
        M = 0;
    }
    pa.Mdeg = M;
    pa.den = den;

    pa.num.assign(L + 1, cplx(0.0));
    for (int i = 0; i <= L; ++i) {
        cplx acc = 0.0;
        for (int j = 0; j <= std::min(i, M); ++j) acc += den[j] * b.coeff(i - j);
        pa.num[i] = acc;
    }

    std::vector<cplx> poles = detail::polynomial_roots(pa.den);
    std::vector<cplx> zeros = detail::polynomial_roots(pa.num);
    std::vector<bool> zero_used(zeros.size(), false);
    for (cplx p : poles) {
        bool doublet = false;
        for (std::size_t zi = 0; zi < zeros.size(); ++zi) {
            if (zero_used[zi]) continue;
            if (std::abs(p - zeros[zi]) < 1e-8 * (1.0 + std::abs(p))) {
                zero_used[zi] = true;
                doublet = true;
                break;
            }
        }
        (doublet ? pa.spurious : pa.poles).push_back(p);
    }
    return pa;
}

}  // namespace gevreylab

#endif
