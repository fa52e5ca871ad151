#ifndef GEVREYLAB_MULTI_SERIES_HPP
#define GEVREYLAB_MULTI_SERIES_HPP

#include <map>

#include "gevreylab/multi_index.hpp"

namespace gevreylab {

// Truncated multivariate power series with scalar complex coefficients,
// stored sparsely. Absent index = zero coefficient; every stored index has
// degree <= trunc_degree().
class MultiSeries {
public:
    using TermMap = std::map<MultiIndex, cplx, GradedLexLess>;

    MultiSeries(int dim, int trunc_degree) : dim_(dim), trunc_(trunc_degree) {
        if (dim_ < 1) throw structural_error("MultiSeries: dimension must be >= 1");
        if (trunc_ < 0) throw structural_error("MultiSeries: negative truncation degree");
    }

    int dim() const { return dim_; }
    int trunc_degree() const { return trunc_; }
    const TermMap& terms() const { return terms_; }

    cplx coeff(const MultiIndex& Q) const {
        auto it = terms_.find(Q);
        return it == terms_.end() ? cplx(0.0) : it->second;
    }
    void set_coeff(const MultiIndex& Q, cplx v) {
        if (Q.dim() != dim_) throw structural_error("MultiSeries: index dimension mismatch");
        if (Q.degree() > trunc_) throw structural_error("MultiSeries: index beyond truncation");
        if (!is_finite(v)) throw structural_error("MultiSeries: non-finite coefficient");
        if (v == cplx(0.0)) terms_.erase(Q);
        else terms_[Q] = v;
    }
    void add_coeff(const MultiIndex& Q, cplx v) { set_coeff(Q, coeff(Q) + v); }

    static MultiSeries zero(int dim, int trunc) { return MultiSeries(dim, trunc); }
    static MultiSeries constant(int dim, cplx v, int trunc) {
        MultiSeries s(dim, trunc);
        s.set_coeff(MultiIndex::zero(dim), v);
        return s;
    }
    static MultiSeries variable(int dim, int l, int trunc) {
        MultiSeries s(dim, trunc);
        s.set_coeff(MultiIndex::unit(dim, l), cplx(1.0));
        return s;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& [Q, v] : terms_) m = std::max(m, std::abs(v));
        return m;
    }
    MultiSeries truncated(int degree) const {
        MultiSeries out(dim_, degree);
        for (const auto& [Q, v] : terms_)
            if (Q.degree() <= degree) out.terms_[Q] = v;
        return out;
    }

private:
    int dim_;
    int trunc_;
    TermMap terms_;
};

inline MultiSeries ms_add(const MultiSeries& a, const MultiSeries& b) {
    if (a.dim() != b.dim()) throw structural_error("ms_add: dimension mismatch");
    MultiSeries out(a.dim(), std::min(a.trunc_degree(), b.trunc_degree()));
    for (const auto& [Q, v] : a.terms())
        if (Q.degree() <= out.trunc_degree()) out.add_coeff(Q, v);
    for (const auto& [Q, v] : b.terms())
        if (Q.degree() <= out.trunc_degree()) out.add_coeff(Q, v);
    return out;
}

inline MultiSeries ms_scale(cplx s, const MultiSeries& a) {
    MultiSeries out(a.dim(), a.trunc_degree());
    for (const auto& [Q, v] : a.terms()) out.set_coeff(Q, s * v);
    return out;
}

inline MultiSeries ms_mul(const MultiSeries& a, const MultiSeries& b) {
    if (a.dim() != b.dim()) throw structural_error("ms_mul: dimension mismatch");
    MultiSeries out(a.dim(), std::min(a.trunc_degree(), b.trunc_degree()));
    for (const auto& [Qa, va] : a.terms()) {
        int da = Qa.degree();
        for (const auto& [Qb, vb] : b.terms()) {
            if (da + Qb.degree() > out.trunc_degree()) continue;
            out.add_coeff(Qa + Qb, va * vb);
        }
    }
    return out;
}

// f(subs_1,...,subs_n), each subs_i with zero constant term, truncated at f's
// truncation degree. Powers of the substituted series are cached.
inline MultiSeries ms_substitute(const MultiSeries& f, const std::vector<MultiSeries>& subs) {
    if (static_cast<int>(subs.size()) != f.dim())
        throw structural_error("ms_substitute: wrong number of substituted series");
    int out_dim = subs.empty() ? f.dim() : subs[0].dim();
    int trunc = f.trunc_degree();
    for (const auto& s : subs) {
        if (s.dim() != out_dim) throw structural_error("ms_substitute: inconsistent dimensions");
        if (s.coeff(MultiIndex::zero(out_dim)) != cplx(0.0))
            throw precondition_error("ms_substitute: substituted series has nonzero constant term");
        trunc = std::min(trunc, s.trunc_degree());
    }

    int max_pow = 0;
    for (const auto& [j, v] : f.terms())
        for (int l = 0; l < f.dim(); ++l) max_pow = std::max(max_pow, j[l]);
    std::vector<std::vector<MultiSeries>> pows(f.dim());
    for (int l = 0; l < f.dim(); ++l) {
        pows[l].push_back(MultiSeries::constant(out_dim, cplx(1.0), trunc));
        for (int p = 1; p <= max_pow; ++p)
            pows[l].push_back(ms_mul(pows[l].back(), subs[l].truncated(trunc)));
    }

    MultiSeries out(out_dim, trunc);
    for (const auto& [j, v] : f.terms()) {
        if (j.degree() > trunc) continue;  // zero constant terms: degree |j| needs order >= |j|
        MultiSeries term = MultiSeries::constant(out_dim, v, trunc);
        for (int l = 0; l < f.dim(); ++l)
            if (j[l] > 0) term = ms_mul(term, pows[l][j[l]]);
        out = ms_add(out, term);
    }
    return out;
}

inline double ms_max_diff(const MultiSeries& a, const MultiSeries& b) {
    double m = 0.0;
    int deg = std::min(a.trunc_degree(), b.trunc_degree());
    for (const auto& [Q, v] : a.terms())
        if (Q.degree() <= deg) m = std::max(m, std::abs(v - b.coeff(Q)));
    for (const auto& [Q, v] : b.terms())
        if (Q.degree() <= deg) m = std::max(m, std::abs(v - a.coeff(Q)));
    return m;
}

}  // namespace gevreylab

#endif
