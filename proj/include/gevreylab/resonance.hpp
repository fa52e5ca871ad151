#ifndef GEVREYLAB_RESONANCE_HPP
#define GEVREYLAB_RESONANCE_HPP

#include <optional>

#include "gevreylab/vector_field.hpp"

namespace gevreylab {

struct LinearPart {
    int n = 0;
    std::vector<cplx> lambda;

    LinearPart() = default;
    LinearPart(std::vector<cplx> lam) : n(static_cast<int>(lam.size())), lambda(std::move(lam)) {}

    // Exact mode: if all eigenvalues are real rationals with a small common
    // denominator, divisors (Q,lambda)-lambda_i are evaluated on integer
    // numerators. Detection is ill-posed in floating point otherwise.
    std::optional<std::pair<std::vector<long long>, long long>> rational_numerators() const {
        for (cplx v : lambda)
            if (std::abs(v.imag()) > 1e-12) return std::nullopt;
        for (long long den = 1; den <= 48; ++den) {
            bool ok = true;
            std::vector<long long> num(lambda.size());
            for (std::size_t i = 0; i < lambda.size(); ++i) {
                double scaled = lambda[i].real() * double(den);
                double r = std::round(scaled);
                if (std::abs(scaled - r) > 1e-9 || std::abs(r) > 1e15) { ok = false; break; }
                num[i] = static_cast<long long>(r);
            }
            if (ok) return std::make_pair(num, den);
        }
        return std::nullopt;
    }
};

struct Resonance {
    int i = 0;  // component index, 1-based as in the reports
    MultiIndex Q;
    double defect = 0.0;  // |(Q,lambda) - lambda_i|
};

// All (i, Q) with 2 <= |Q| <= max_degree and |(Q,lambda)-lambda_i| < eps,
// graded-lex in Q, then by i.
inline std::vector<Resonance> detect_resonances(const LinearPart& lp, int max_degree, double eps) {
    if (max_degree < 2) throw precondition_error("detect_resonances: max_degree must be >= 2");
    if (eps <= 0.0) throw precondition_error("detect_resonances: eps must be > 0");
    std::vector<Resonance> out;
    auto exact = lp.rational_numerators();
    for_each_degree_range(lp.n, 2, max_degree, [&](const MultiIndex& Q) {
        for (int i = 0; i < lp.n; ++i) {
            double defect;
            if (exact) {
                long long acc = -exact->first[i];
                for (int l = 0; l < lp.n; ++l) acc += static_cast<long long>(Q[l]) * exact->first[l];
                defect = std::abs(double(acc)) / double(exact->second);
            } else {
                cplx v = -lp.lambda[i];
                for (int l = 0; l < lp.n; ++l) v += double(Q[l]) * lp.lambda[l];
                defect = std::abs(v);
            }
            if (defect < eps) out.push_back({i + 1, Q, defect});
        }
    });
    return out;
}

struct MonomialScan {
    std::optional<MultiIndex> r;
    bool is_one_resonant = false;
    int scan_degree = 0;
    std::vector<MultiIndex> null_vectors;  // all found (r,lambda) ~ 0 within scan
};

// Search for the primitive null multiindex generating all resonances within
// the scan range. One-resonance is certified only up to scan_degree.
inline MonomialScan find_resonance_monomial(const LinearPart& lp, int max_degree, double eps) {
    if (max_degree < 2) throw precondition_error("find_resonance_monomial: max_degree must be >= 2");
    MonomialScan scan;
    scan.scan_degree = max_degree;
    auto exact = lp.rational_numerators();
    for_each_degree_range(lp.n, 1, max_degree, [&](const MultiIndex& R) {
        double v;
        if (exact) {
            long long acc = 0;
            for (int l = 0; l < lp.n; ++l) acc += static_cast<long long>(R[l]) * exact->first[l];
            v = std::abs(double(acc)) / double(exact->second);
        } else {
            cplx c = 0.0;
            for (int l = 0; l < lp.n; ++l) c += double(R[l]) * lp.lambda[l];
            v = std::abs(c);
        }
        if (v < eps) scan.null_vectors.push_back(R);
    });
    if (scan.null_vectors.empty()) return scan;  // no monomial, not 1-resonant

    // Primitive candidate: gcd 1, graded-lex minimal among null vectors.
    std::optional<MultiIndex> prim;
    for (const auto& R : scan.null_vectors)
        if (R.gcd() == 1) { prim = R; break; }  // enumeration is graded-lex
    if (!prim) return scan;

    bool generates = true;
    for (const auto& R : scan.null_vectors)
        if (!R.is_multiple_of(*prim)) { generates = false; break; }

    // Every detected resonance must factor as Q = l*r + e_i, exactly.
    if (generates) {
        for (const auto& res : detect_resonances(lp, max_degree, eps)) {
            MultiIndex ei = MultiIndex::unit(lp.n, res.i - 1);
            if (!res.Q.dominates(ei) || !(res.Q - ei).is_multiple_of(*prim)) {
                generates = false;
                break;
            }
        }
    }
    scan.r = prim;
    scan.is_one_resonant = generates;
    return scan;
}

struct ResonanceReport {
    std::vector<Resonance> resonances;
    std::optional<MultiIndex> r;
    bool is_one_resonant = false;
    int scan_degree = 0;
    int p = 0;               // number of nonzero entries of r
    cplx beta = 0.0;         // sum r_i alpha_i, when alpha given
    bool ichikawa = false;   // beta != 0
};

inline ResonanceReport build_resonance_report(const LinearPart& lp,
                                              const std::vector<cplx>* alpha,
                                              int max_degree, double eps) {
    ResonanceReport rep;
    rep.resonances = detect_resonances(lp, max_degree, eps);
    MonomialScan scan = find_resonance_monomial(lp, max_degree, eps);
    rep.r = scan.r;
    rep.is_one_resonant = scan.is_one_resonant;
    rep.scan_degree = max_degree;
    if (rep.r) {
        for (int i = 0; i < lp.n; ++i)
            if ((*rep.r)[i] != 0) ++rep.p;
        if (alpha) {
            for (int i = 0; i < lp.n; ++i) rep.beta += double((*rep.r)[i]) * (*alpha)[i];
            rep.ichikawa = std::abs(rep.beta) > eps;
        }
    }
    return rep;
}

struct WellPreparedReport {
    bool ok = false;
    cplx beta = 0.0;
    std::vector<std::string> diagnostics;
};

namespace detail {
// f_i divisible by x_i: every multiindex j carrying a nonzero i-th component
// must have j_i >= 1.
inline bool component_divisible(const VectorFieldSpec& spec, int i, std::string* offender) {
    for (const auto& [j, comps] : spec.f) {
        if (!comps[i].is_zero() && j[i] == 0) {
            if (offender) *offender = j.str();
            return false;
        }
    }
    return true;
}

// max_{j'} | sum_{i in I} r_i * coeff of f~_i at j' |, coefficientwise in z.
inline double prepared_sum_defect(const VectorFieldSpec& spec) {
    std::map<MultiIndex, ZSeries, GradedLexLess> acc;
    for (int i = 0; i < spec.n; ++i) {
        if (spec.r[i] == 0) continue;
        for (const auto& [j, comps] : spec.f) {
            if (comps[i].is_zero()) continue;
            if (j[i] == 0) continue;  // divisibility failure reported separately
            MultiIndex jp = j - MultiIndex::unit(spec.n, i);
            ZSeries term = zs_scale(double(spec.r[i]), comps[i]);
            auto it = acc.find(jp);
            if (it == acc.end()) acc.emplace(jp, term);
            else it->second = zs_add(it->second, term);
        }
    }
    double worst = 0.0;
    for (const auto& [jp, s] : acc) worst = std::max(worst, s.max_abs());
    return worst;
}
}  // namespace detail

// Verify the well-prepared (champs-2) shape: f_i = x_i f~_i for i in I,
// sum_{i in I} r_i f~_i = 0 coefficientwise, beta = (r,alpha) != 0.
inline WellPreparedReport check_well_prepared(const VectorFieldSpec& spec) {
    WellPreparedReport rep;
    rep.ok = true;
    if (!spec.has_r()) {
        rep.ok = false;
        rep.diagnostics.push_back("no resonance monomial r declared");
        return rep;
    }
    LinearPart lp(spec.lambda);
    cplx rl = 0.0;
    for (int i = 0; i < spec.n; ++i) rl += double(spec.r[i]) * spec.lambda[i];
    if (std::abs(rl) >= spec.tol.eps_res) {
        rep.ok = false;
        rep.diagnostics.push_back("(r,lambda) != 0: r is not a null multiindex");
    }
    rep.beta = spec.beta();
    if (std::abs(rep.beta) <= spec.tol.eps_res) {
        rep.ok = false;
        rep.diagnostics.push_back("beta = sum r_i alpha_i vanishes (Ichikawa condition fails)");
    }
    for (int i : spec.resonant_support()) {
        std::string offender;
        if (!detail::component_divisible(spec, i, &offender)) {
            rep.ok = false;
            rep.diagnostics.push_back("f_" + std::to_string(i + 1) + " not divisible by x_" +
                                      std::to_string(i + 1) + " (term " + offender + ")");
        }
    }
    double defect = detail::prepared_sum_defect(spec);
    double scale = std::max(1.0, spec.f_max_abs());
    if (defect > spec.tol.rel_cmp * scale) {
        rep.ok = false;
        rep.diagnostics.push_back("sum r_i f~_i != 0 (max defect " + std::to_string(defect) + ")");
    }
    return rep;
}

struct HypothesisReport {
    bool h1 = false, h2 = false, h3 = false, h4 = false, h5 = false;
    bool hp1 = false, hp2 = false, hp3 = false;
    int i0 = 0;            // 1-based witness index for H2 (0 = none)
    double delta1 = 0.0;   // attained H2 minimum (+inf when vacuous)
    int m0 = 0;            // lemma-2 scan result
    double delta0 = 0.0;
    bool m0_found = false;
    int scan_degree = 0;
    std::vector<std::string> offenders;
};

struct M0Delta0 {
    int m0 = 2;
    double delta0 = std::numeric_limits<double>::infinity();
    bool found = false;
    bool no_resonances = false;
};

// Smallest m0 with Re((alpha,Q)-alpha_l) >= delta0 > 0 for all resonant (l,Q)
// with m0 <= |Q| <= scan_degree; delta0 is the attained minimum on that tail.
inline M0Delta0 compute_m0_delta0(const LinearPart& lp, const std::vector<cplx>& alpha,
                                  int scan_degree, double eps) {
    if (scan_degree < 2) throw precondition_error("compute_m0_delta0: scan_degree must be >= 2");
    M0Delta0 out;
    auto res = detect_resonances(lp, scan_degree, eps);
    if (res.empty()) {
        out.no_resonances = true;
        out.found = true;  // vacuously: sentinel (2, +inf)
        return out;
    }
    // suffix minimum of Re((alpha,Q)-alpha_l) over degrees
    std::vector<double> degree_min(scan_degree + 1, std::numeric_limits<double>::infinity());
    for (const auto& rz : res) {
        cplx v = -alpha[rz.i - 1];
        for (int l = 0; l < lp.n; ++l) v += double(rz.Q[l]) * alpha[l];
        int d = rz.Q.degree();
        degree_min[d] = std::min(degree_min[d], v.real());
    }
    std::vector<double> suffix(scan_degree + 2, std::numeric_limits<double>::infinity());
    for (int m = scan_degree; m >= 2; --m) suffix[m] = std::min(degree_min[m], suffix[m + 1]);
    for (int m = 2; m <= scan_degree; ++m) {
        if (suffix[m] > 0.0) {
            out.m0 = m;
            out.delta0 = suffix[m];
            out.found = true;
            return out;
        }
    }
    out.found = false;  // H2-side failure on the scanned range
    out.m0 = 0;
    out.delta0 = suffix[2];
    return out;
}

namespace detail {
inline bool is_real(cplx v) { return std::abs(v.imag()) <= 1e-12; }

// H2 core: best witness i0 and the attained minimum, over real eigenvalue
// indices. alpha entries may be pre-divided by beta for the H'2 variant.
inline std::pair<int, double> h2_best_witness(const std::vector<cplx>& lambda,
                                              const std::vector<cplx>& alpha) {
    int n = static_cast<int>(lambda.size());
    int best_i0 = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int i0 = 0; i0 < n; ++i0) {
        if (!is_real(lambda[i0]) || std::abs(lambda[i0]) <= 1e-12) continue;
        double mn = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (i == i0 || !is_real(lambda[i])) continue;
            cplx v = alpha[i] - lambda[i] / lambda[i0] * alpha[i0];
            mn = std::min(mn, v.real());
        }
        if (mn > best) { best = mn; best_i0 = i0 + 1; }
    }
    return {best_i0, best};
}
}  // namespace detail

// Direct inequality checks for H1-H5 and H'1-H'3 over the scanned degree range.
inline HypothesisReport check_hypotheses(const VectorFieldSpec& spec, int scan_degree) {
    if (scan_degree < 2) throw precondition_error("check_hypotheses: scan_degree must be >= 2");
    HypothesisReport rep;
    rep.scan_degree = scan_degree;
    const int n = spec.n;
    LinearPart lp(spec.lambda);

    bool all_zero = true, imag_ok = true;
    int real_count = 0;
    bool zero_eigen = false;
    for (int i = 0; i < n; ++i) {
        cplx l = spec.lambda[i];
        if (std::abs(l) > spec.tol.eps_res) all_zero = false;
        else zero_eigen = true;
        if (l.imag() < -1e-12) { imag_ok = false; rep.offenders.push_back("H1: Im lambda_" + std::to_string(i + 1) + " < 0"); }
        if (detail::is_real(l)) ++real_count;
    }
    rep.h1 = !all_zero && imag_ok;
    rep.hp1 = imag_ok && (zero_eigen || real_count >= 2);
    if (!rep.hp1 && imag_ok) rep.offenders.push_back("H'1: no zero eigenvalue and fewer than two real eigenvalues");

    // H2 (and delta1 witness)
    bool any_real = real_count > 0;
    bool real_all_zero = true;
    for (int i = 0; i < n; ++i)
        if (detail::is_real(spec.lambda[i]) && std::abs(spec.lambda[i]) > 1e-12) real_all_zero = false;
    if (!any_real) {
        rep.h2 = true;
        rep.delta1 = std::numeric_limits<double>::infinity();
    } else if (real_all_zero) {
        rep.h2 = true;
        rep.delta1 = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (!detail::is_real(spec.lambda[i])) continue;
            rep.delta1 = std::min(rep.delta1, spec.alpha[i].real());
            if (spec.alpha[i].real() <= 0.0) {
                rep.h2 = false;
                rep.offenders.push_back("H2: Re alpha_" + std::to_string(i + 1) + " <= 0 with all real eigenvalues zero");
            }
        }
    } else {
        auto [i0, mn] = detail::h2_best_witness(spec.lambda, spec.alpha);
        rep.i0 = i0;
        rep.delta1 = mn;
        rep.h2 = mn > 0.0;
        if (!rep.h2) rep.offenders.push_back("H2: best witness min = " + std::to_string(mn));
    }

    // H3 over detected resonances
    rep.h3 = true;
    for (const auto& rz : detect_resonances(lp, scan_degree, spec.tol.eps_res)) {
        cplx v = spec.alpha[rz.i - 1];
        for (int l = 0; l < n; ++l) v -= double(rz.Q[l]) * spec.alpha[l];
        double nearest = std::round(v.real());
        if (std::abs(v.imag()) <= spec.tol.h3_integer && nearest >= -spec.tol.h3_integer &&
            std::abs(v.real() - nearest) <= spec.tol.h3_integer) {
            rep.h3 = false;
            rep.offenders.push_back("H3: alpha_" + std::to_string(rz.i) + " - (Q,alpha) = " +
                                    std::to_string(int(nearest)) + " at Q=" + rz.Q.str());
        }
    }

    // H4 / H'3: nonreal components divisible by x_i
    rep.h4 = true;
    for (int i = 0; i < n; ++i) {
        if (detail::is_real(spec.lambda[i])) continue;
        std::string offender;
        if (!detail::component_divisible(spec, i, &offender)) {
            rep.h4 = false;
            rep.offenders.push_back("H4: f_" + std::to_string(i + 1) + "/x_" + std::to_string(i + 1) +
                                    " not holomorphic (term " + offender + ")");
        }
    }
    rep.hp3 = rep.h4;

    // H5: divisibility on I plus the vanishing weighted sum
    if (spec.has_r()) {
        rep.h5 = true;
        for (int i : spec.resonant_support()) {
            std::string offender;
            if (!detail::component_divisible(spec, i, &offender)) {
                rep.h5 = false;
                rep.offenders.push_back("H5: f_" + std::to_string(i + 1) + " not divisible by x_" +
                                        std::to_string(i + 1) + " (term " + offender + ")");
            }
        }
        double defect = detail::prepared_sum_defect(spec);
        if (defect > spec.tol.rel_cmp * std::max(1.0, spec.f_max_abs())) {
            rep.h5 = false;
            rep.offenders.push_back("H5: sum r_i f~_i != 0 (max defect " + std::to_string(defect) + ")");
        }
    } else {
        rep.h5 = false;
        rep.offenders.push_back("H5: no resonance monomial r declared");
    }

    // H'2: as H2 with alpha/beta
    if (spec.has_r() && std::abs(spec.beta()) > spec.tol.eps_res) {
        std::vector<cplx> ab(spec.alpha);
        for (cplx& v : ab) v /= spec.beta();
        if (!any_real) rep.hp2 = true;
        else if (real_all_zero) {
            rep.hp2 = true;
            for (int i = 0; i < n; ++i)
                if (detail::is_real(spec.lambda[i]) && ab[i].real() <= 0.0) rep.hp2 = false;
        } else {
            auto [i0, mn] = detail::h2_best_witness(spec.lambda, ab);
            (void)i0;
            rep.hp2 = mn > 0.0;
        }
    } else {
        rep.hp2 = false;
        if (!spec.has_r()) rep.offenders.push_back("H'2: no resonance monomial r declared");
        else rep.offenders.push_back("H'2: beta = 0");
    }

    if (rep.h2) {
        M0Delta0 md = compute_m0_delta0(lp, spec.alpha, scan_degree, spec.tol.eps_res);
        rep.m0 = md.m0;
        rep.delta0 = md.delta0;
        rep.m0_found = md.found;
    }
    return rep;
}

}  // namespace gevreylab

#endif
