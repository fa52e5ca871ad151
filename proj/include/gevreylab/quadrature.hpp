#ifndef GEVREYLAB_QUADRATURE_HPP
#define GEVREYLAB_QUADRATURE_HPP

#include <functional>

#include "gevreylab/common.hpp"

namespace gevreylab {

struct QuadResult {
    cplx value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
};

namespace detail {

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15 abscissae/weights).
inline constexpr double kGK15_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kGK15_wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGK15_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename Fn>
std::pair<cplx, double> gk15_panel(Fn& f, double a, double b) {
    double h = 0.5 * (b - a), c = 0.5 * (a + b);
    cplx fc = f(c);
    cplx kron = kGK15_wk[7] * fc;
    cplx gauss = kGK15_wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        cplx lo = f(c - h * kGK15_x[j]), hi = f(c + h * kGK15_x[j]);
        kron += kGK15_wk[j] * (lo + hi);
        if (j % 2 == 1) gauss += kGK15_wg[j / 2] * (lo + hi);
    }
    kron *= h;
    gauss *= h;
    return {kron, std::abs(kron - gauss)};
}

template <typename Fn>
void gk15_adaptive_rec(Fn& f, double a, double b, double tol, int depth, QuadResult& out) {
    auto [v, err] = gk15_panel(f, a, b);
    if (err <= tol || depth <= 0) {
        out.value += v;
        out.error_estimate += err;
        ++out.panels;
        return;
    }
    double c = 0.5 * (a + b);
    gk15_adaptive_rec(f, a, c, tol * 0.5, depth - 1, out);
    gk15_adaptive_rec(f, c, b, tol * 0.5, depth - 1, out);
}

}  // namespace detail

// Adaptive Gauss-Kronrod on [a, b] for a complex-valued integrand of a real
// variable; smooth integrands only (the Laplace ray, after the v = |t|
// parameterization, is entire).
template <typename Fn>
QuadResult gk15_adaptive(Fn f, double a, double b, double tol_abs = 1e-12, int max_depth = 28) {
    QuadResult out;
    detail::gk15_adaptive_rec(f, a, b, tol_abs, max_depth, out);
    return out;
}

}  // namespace gevreylab

#endif
