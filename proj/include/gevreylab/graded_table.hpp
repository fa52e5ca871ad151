#ifndef GEVREYLAB_GRADED_TABLE_HPP
#define GEVREYLAB_GRADED_TABLE_HPP

#include <map>

#include "gevreylab/borel_series.hpp"
#include "gevreylab/multi_index.hpp"

namespace gevreylab {

// Bigraded series machinery shared by the z-plane recurrence (coefficients =
// ZSeries under zs_mul) and the Borel-plane recurrence (coefficients in the
// unitized convolution algebra). A scalar table maps y-multiindices to ring
// elements; multiplication is Cauchy in y and ring multiplication on
// coefficients.

struct ZSeriesRing {
    using Elem = ZSeries;
    int order;
    explicit ZSeriesRing(int order_) : order(order_) {}
    Elem zero() const { return ZSeries::zero(order); }
    Elem one() const { return ZSeries::constant(1.0, order); }
    Elem add(const Elem& a, const Elem& b) const { return zs_add(a, b); }
    Elem mul(const Elem& a, const Elem& b) const { return zs_mul(a, b); }
    bool is_zero(const Elem& a) const { return a.is_zero(); }
};

// Element c*delta + series of the convolution algebra with adjoined unit;
// the Borel image of a z-series with constant term c. Multiplication:
// (c,A)(d,B) = (cd, cB + dA + A*B).
struct BorelElem {
    cplx delta = 0.0;
    BorelSeries tail;
};

struct ConvRing {
    using Elem = BorelElem;
    int max_order;  // cap on stored tail orders
    explicit ConvRing(int max_order_) : max_order(max_order_) {}
    Elem zero() const { return {cplx(0.0), BorelSeries::zero(1, max_order)}; }
    Elem one() const { return {cplx(1.0), BorelSeries::zero(1, max_order)}; }
    Elem add(const Elem& a, const Elem& b) const {
        return {a.delta + b.delta, b_add(a.tail, b.tail)};
    }
    Elem mul(const Elem& a, const Elem& b) const {
        Elem out;
        out.delta = a.delta * b.delta;
        BorelSeries acc = conv(a.tail, b.tail);
        if (acc.trunc_order() > max_order) acc = acc.truncated(max_order);
        // delta cross terms keep the partner's truncation order; skip exact
        // zeros so they do not needlessly cap the result order.
        if (a.delta != cplx(0.0)) acc = b_add(acc, b_scale(a.delta, b.tail));
        if (b.delta != cplx(0.0)) acc = b_add(acc, b_scale(b.delta, a.tail));
        out.tail = acc;
        return out;
    }
    bool is_zero(const Elem& a) const { return a.delta == cplx(0.0) && a.tail.valuation() > a.tail.trunc_order(); }
};

template <typename Ring>
using ScalarTable = std::map<MultiIndex, typename Ring::Elem, GradedLexLess>;

template <typename Ring>
ScalarTable<Ring> table_mul(const Ring& ring, const ScalarTable<Ring>& a,
                            const ScalarTable<Ring>& b, int ydeg) {
    ScalarTable<Ring> out;
    for (const auto& [Qa, ca] : a) {
        if (ring.is_zero(ca)) continue;
        int da = Qa.degree();
        for (const auto& [Qb, cb] : b) {
            if (da + Qb.degree() > ydeg) continue;
            if (ring.is_zero(cb)) continue;
            typename Ring::Elem prod = ring.mul(ca, cb);
            MultiIndex Q = Qa + Qb;
            auto it = out.find(Q);
            if (it == out.end()) out.emplace(Q, std::move(prod));
            else it->second = ring.add(it->second, prod);
        }
    }
    return out;
}

// rhs_Q for all |Q| <= ydeg of  sum_j fimg_j * prod_l Y_l^{j_l}  where Y_l are
// scalar tables (substituted variables) and fimg maps multiindices j (|j|>=2)
// to per-component ring elements. Output: Q -> vector of n elements.
template <typename Ring>
std::map<MultiIndex, std::vector<typename Ring::Elem>, GradedLexLess>
assemble_rhs(const Ring& ring, int n,
             const std::map<MultiIndex, std::vector<typename Ring::Elem>, GradedLexLess>& fimg,
             const std::vector<ScalarTable<Ring>>& Y, int ydeg) {
    using Elem = typename Ring::Elem;
    std::map<MultiIndex, std::vector<Elem>, GradedLexLess> out;

    std::vector<int> max_pow(n, 0);
    for (const auto& [j, comps] : fimg)
        for (int l = 0; l < n; ++l) max_pow[l] = std::max(max_pow[l], j[l]);

    std::vector<std::vector<ScalarTable<Ring>>> pows(n);
    ScalarTable<Ring> unit;
    unit.emplace(MultiIndex::zero(n), ring.one());
    for (int l = 0; l < n; ++l) {
        pows[l].push_back(unit);
        for (int p = 1; p <= max_pow[l]; ++p)
            pows[l].push_back(table_mul(ring, pows[l].back(), Y[l], ydeg));
    }

    for (const auto& [j, comps] : fimg) {
        if (j.degree() > ydeg) continue;
        ScalarTable<Ring> prod = unit;
        for (int l = 0; l < n; ++l)
            if (j[l] > 0) prod = table_mul(ring, prod, pows[l][j[l]], ydeg);
        for (const auto& [Q, c] : prod) {
            for (int i = 0; i < n; ++i) {
                if (ring.is_zero(comps[i])) continue;
                Elem term = ring.mul(comps[i], c);
                auto it = out.find(Q);
                if (it == out.end()) {
                    std::vector<Elem> fresh(n, ring.zero());
                    it = out.emplace(Q, std::move(fresh)).first;
                }
                it->second[i] = ring.add(it->second[i], term);
            }
        }
    }
    return out;
}

}  // namespace gevreylab

#endif
