#ifndef GEVREYLAB_VECTOR_FIELD_HPP
#define GEVREYLAB_VECTOR_FIELD_HPP

#include <map>
#include <optional>

#include "gevreylab/multi_index.hpp"
#include "gevreylab/z_series.hpp"

namespace gevreylab {

// Input system  z^{k+1} dx/dz = (Lambda + z^k A) x + z^k f(z,x)
// with Lambda = diag(lambda), A = diag(alpha), f(z,x) = sum_j f_j(z) x^j.
// r is the declared resonance monomial exponent (all zeros = none declared).
struct VectorFieldSpec {
    int n = 0;
    int k = 1;
    std::vector<cplx> lambda;
    std::vector<cplx> alpha;
    MultiIndex r;
    // f_j(z): vector of n ZSeries per multiindex j, |j| >= 2.
    std::map<MultiIndex, std::vector<ZSeries>, GradedLexLess> f;
    int trunc_N = 8;   // truncation degree in x/y
    int trunc_M = 12;  // truncation order in z
    Tolerances tol;

    // Indices with r_i != 0 (the set the paper calls I, |I| = p).
    std::vector<int> resonant_support() const {
        std::vector<int> idx;
        for (int i = 0; i < r.dim(); ++i)
            if (r[i] != 0) idx.push_back(i);
        return idx;
    }
    bool has_r() const { return r.dim() == n && r.degree() > 0; }

    cplx beta() const {  // (r, alpha)
        cplx b = 0.0;
        for (int i = 0; i < n && i < r.dim(); ++i) b += double(r[i]) * alpha[i];
        return b;
    }

    void validate() const {
        if (n < 2) throw structural_error("VectorFieldSpec: n must be >= 2");
        if (k < 1) throw structural_error("VectorFieldSpec: k must be >= 1");
        if (static_cast<int>(lambda.size()) != n || static_cast<int>(alpha.size()) != n)
            throw structural_error("VectorFieldSpec: lambda/alpha length != n");
        if (r.dim() != n) throw structural_error("VectorFieldSpec: r dimension != n");
        for (const auto& [j, comps] : f) {
            if (j.dim() != n) throw structural_error("VectorFieldSpec: f index dimension != n");
            if (j.degree() < 2)
                throw structural_error("VectorFieldSpec: nonlinearity index " + j.str() + " has |j| < 2");
            if (static_cast<int>(comps.size()) != n)
                throw structural_error("VectorFieldSpec: f_" + j.str() + " component count != n");
        }
        if (trunc_N < 1 || trunc_M < 0)
            throw structural_error("VectorFieldSpec: invalid truncation orders");
    }

    double f_max_abs() const {
        double m = 0.0;
        for (const auto& [j, comps] : f)
            for (const auto& s : comps) m = std::max(m, s.max_abs());
        return m;
    }
};

}  // namespace gevreylab

#endif
