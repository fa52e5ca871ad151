#ifndef GEVREYLAB_Z_SERIES_HPP
#define GEVREYLAB_Z_SERIES_HPP

#include "gevreylab/common.hpp"

namespace gevreylab {

// Truncated power series in one variable z with complex coefficients.
// coeff(j) is the coefficient of z^j for 0 <= j <= trunc_order(); anything
// beyond the truncation order is unknown, not zero.
class ZSeries {
public:
    ZSeries() : c_(1, cplx(0.0)) {}
    explicit ZSeries(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.assign(1, cplx(0.0));
        for (cplx v : c_)
            if (!is_finite(v)) throw structural_error("ZSeries: non-finite coefficient");
    }
    static ZSeries zero(int order) { return ZSeries(std::vector<cplx>(order + 1, cplx(0.0))); }
    static ZSeries constant(cplx v, int order) {
        ZSeries s = zero(order);
        s.c_[0] = v;
        return s;
    }
    static ZSeries monomial(cplx v, int j, int order) {
        if (j > order) throw precondition_error("ZSeries::monomial: power beyond order");
        ZSeries s = zero(order);
        s.c_[j] = v;
        return s;
    }

    int trunc_order() const { return static_cast<int>(c_.size()) - 1; }
    cplx coeff(int j) const { return (j >= 0 && j <= trunc_order()) ? c_[j] : cplx(0.0); }
    void set_coeff(int j, cplx v) {
        if (j < 0 || j > trunc_order()) throw structural_error("ZSeries::set_coeff: out of range");
        c_[j] = v;
    }
    const std::vector<cplx>& coeffs() const { return c_; }

    // Smallest index with a (exactly) nonzero coefficient; trunc_order()+1 if none.
    int valuation() const {
        for (int j = 0; j <= trunc_order(); ++j)
            if (c_[j] != cplx(0.0)) return j;
        return trunc_order() + 1;
    }
    bool is_zero() const { return valuation() > trunc_order(); }
    double max_abs() const {
        double m = 0.0;
        for (cplx v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    cplx eval(cplx z) const {  // Horner
        cplx acc = 0.0;
        for (int j = trunc_order(); j >= 0; --j) acc = acc * z + c_[j];
        return acc;
    }

    ZSeries truncated(int order) const {
        std::vector<cplx> out(order + 1, cplx(0.0));
        for (int j = 0; j <= std::min(order, trunc_order()); ++j) out[j] = c_[j];
        return ZSeries(std::move(out));
    }

private:
    std::vector<cplx> c_;
};

inline ZSeries zs_add(const ZSeries& a, const ZSeries& b) {
    int order = std::min(a.trunc_order(), b.trunc_order());
    std::vector<cplx> out(order + 1);
    for (int j = 0; j <= order; ++j) out[j] = a.coeff(j) + b.coeff(j);
    return ZSeries(std::move(out));
}

inline ZSeries zs_sub(const ZSeries& a, const ZSeries& b) {
    int order = std::min(a.trunc_order(), b.trunc_order());
    std::vector<cplx> out(order + 1);
    for (int j = 0; j <= order; ++j) out[j] = a.coeff(j) - b.coeff(j);
    return ZSeries(std::move(out));
}

inline ZSeries zs_scale(cplx s, const ZSeries& a) {
    std::vector<cplx> out(a.coeffs());
    for (cplx& v : out) v *= s;
    return ZSeries(std::move(out));
}

// Cauchy product truncated to min(order_a, order_b).
inline ZSeries zs_mul(const ZSeries& a, const ZSeries& b) {
    int order = std::min(a.trunc_order(), b.trunc_order());
    std::vector<cplx> out(order + 1, cplx(0.0));
    for (int i = 0; i <= order; ++i) {
        cplx ai = a.coeff(i);
        if (ai == cplx(0.0)) continue;
        for (int j = 0; i + j <= order; ++j) out[i + j] += ai * b.coeff(j);
    }
    return ZSeries(std::move(out));
}

// Multiplication by z^j. Knowledge-preserving: the truncation order grows by j.
inline ZSeries zs_shift_up(const ZSeries& a, int j) {
    std::vector<cplx> out(a.trunc_order() + j + 1, cplx(0.0));
    for (int i = 0; i <= a.trunc_order(); ++i) out[i + j] = a.coeff(i);
    return ZSeries(std::move(out));
}

inline double zs_max_diff(const ZSeries& a, const ZSeries& b) {
    double m = 0.0;
    int order = std::min(a.trunc_order(), b.trunc_order());
    for (int j = 0; j <= order; ++j) m = std::max(m, std::abs(a.coeff(j) - b.coeff(j)));
    return m;
}

}  // namespace gevreylab

#endif
