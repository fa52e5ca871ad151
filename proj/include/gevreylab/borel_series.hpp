#ifndef GEVREYLAB_BOREL_SERIES_HPP
#define GEVREYLAB_BOREL_SERIES_HPP

#include "gevreylab/z_series.hpp"

namespace gevreylab {

// Truncated series in the Borel variable t. Entry mu is the coefficient of
// t^mu after the exponent offset n -> n-k of the order-k Borel transform, so
// the source series must have valuation >= k (no negative powers stored).
class BorelSeries {
public:
    BorelSeries() : k_(1), c_(1, cplx(0.0)), src_val_(1) {}
    BorelSeries(int k, std::vector<cplx> coeffs, int source_valuation)
        : k_(k), c_(std::move(coeffs)), src_val_(source_valuation) {
        if (k_ < 1) throw structural_error("BorelSeries: k must be >= 1");
        if (src_val_ < k_)
            throw structural_error("BorelSeries: source valuation below k");
        if (c_.empty()) c_.assign(1, cplx(0.0));
        for (cplx v : c_)
            if (!is_finite(v)) throw structural_error("BorelSeries: non-finite coefficient");
    }
    static BorelSeries zero(int k, int order) {
        return BorelSeries(k, std::vector<cplx>(order + 1, cplx(0.0)), k);
    }

    int k() const { return k_; }
    int trunc_order() const { return static_cast<int>(c_.size()) - 1; }
    int source_valuation() const { return src_val_; }
    cplx coeff(int mu) const { return (mu >= 0 && mu <= trunc_order()) ? c_[mu] : cplx(0.0); }
    void set_coeff(int mu, cplx v) {
        if (mu < 0 || mu > trunc_order()) throw structural_error("BorelSeries: index out of range");
        c_[mu] = v;
    }
    const std::vector<cplx>& coeffs() const { return c_; }

    int valuation() const {  // t-plane valuation; trunc_order()+1 if zero
        for (int j = 0; j <= trunc_order(); ++j)
            if (c_[j] != cplx(0.0)) return j;
        return trunc_order() + 1;
    }
    double max_abs() const {
        double m = 0.0;
        for (cplx v : c_) m = std::max(m, std::abs(v));
        return m;
    }
    cplx eval(cplx t) const {
        cplx acc = 0.0;
        for (int j = trunc_order(); j >= 0; --j) acc = acc * t + c_[j];
        return acc;
    }
    BorelSeries truncated(int order) const {
        std::vector<cplx> out(order + 1, cplx(0.0));
        for (int j = 0; j <= std::min(order, trunc_order()); ++j) out[j] = c_[j];
        return BorelSeries(k_, std::move(out), src_val_);
    }

private:
    int k_;
    std::vector<cplx> c_;
    int src_val_;
};

namespace detail {
// B(p+1, q+1) = p! q! / (p+q+1)!  computed as 1/((p+q+1) * C(p+q, p)).
// The binomial is accumulated multiplicatively; exact in double until ~2^53.
inline double beta_integer(int p, int q) {
    double binom = 1.0;
    for (int i = 1; i <= std::min(p, q); ++i) binom = binom * (p + q - i + 1) / i;
    return 1.0 / ((p + q + 1) * binom);
}
}  // namespace detail

// Convolution product: on monomials t^{a-1} * t^{b-1} = B(a,b) t^{a+b-1},
// i.e. on stored integer powers t^p * t^q = p! q!/(p+q+1)! t^{p+q+1}.
// Result order min(Ta + vb, Tb + va) + 1: coefficients beyond that would need
// unknown coefficients of a factor.
inline BorelSeries conv(const BorelSeries& a, const BorelSeries& b) {
    if (a.k() != b.k()) throw structural_error("conv: Borel order k mismatch");
    int Ta = a.trunc_order(), Tb = b.trunc_order();
    int va = a.valuation(), vb = b.valuation();
    int order = std::min(Ta + vb, Tb + va) + 1;
    std::vector<cplx> out(order + 1, cplx(0.0));
    for (int p = va; p <= Ta; ++p) {
        cplx ap = a.coeff(p);
        if (ap == cplx(0.0)) continue;
        for (int q = vb; q <= Tb && p + q + 1 <= order; ++q) {
            cplx bq = b.coeff(q);
            if (bq == cplx(0.0)) continue;
            out[p + q + 1] += ap * bq * detail::beta_integer(p, q);
        }
    }
    int sv = std::max(a.k(), a.source_valuation() + b.source_valuation() - a.k() + 1);
    return BorelSeries(a.k(), std::move(out), sv);
}

inline BorelSeries b_add(const BorelSeries& a, const BorelSeries& b) {
    if (a.k() != b.k()) throw structural_error("b_add: Borel order k mismatch");
    int order = std::min(a.trunc_order(), b.trunc_order());
    std::vector<cplx> out(order + 1);
    for (int j = 0; j <= order; ++j) out[j] = a.coeff(j) + b.coeff(j);
    return BorelSeries(a.k(), std::move(out), std::min(a.source_valuation(), b.source_valuation()));
}

inline BorelSeries b_scale(cplx s, const BorelSeries& a) {
    std::vector<cplx> out(a.coeffs());
    for (cplx& v : out) v *= s;
    return BorelSeries(a.k(), std::move(out), a.source_valuation());
}

}  // namespace gevreylab

#endif
