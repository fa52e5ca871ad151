#ifndef GEVREYLAB_IO_HPP
#define GEVREYLAB_IO_HPP

#include <fstream>

#include <json.hpp>

#include "gevreylab/borel_plane.hpp"
#include "gevreylab/gevrey.hpp"
#include "gevreylab/small_divisors.hpp"

namespace gevreylab {

inline constexpr const char* kToolName = "gevreylab";
inline constexpr const char* kToolVersion = "0.1.0";

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

namespace jio {

inline json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

inline cplx complex_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw io_error(what + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json zseries_to_json(const ZSeries& s) {
    json arr = json::array();
    for (int j = 0; j <= s.trunc_order(); ++j) arr.push_back(complex_to_json(s.coeff(j)));
    return arr;
}

inline ZSeries zseries_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw io_error(what + ": expected nonempty coefficient array");
    std::vector<cplx> c;
    c.reserve(j.size());
    for (const auto& e : j) c.push_back(complex_from_json(e, what));
    return ZSeries(std::move(c));
}

inline json borel_to_json(const BorelSeries& s) {
    json out;
    out["k"] = s.k();
    out["source_valuation"] = s.source_valuation();
    json arr = json::array();
    for (int j = 0; j <= s.trunc_order(); ++j) arr.push_back(complex_to_json(s.coeff(j)));
    out["t"] = arr;
    return out;
}

template <typename T>
T require(const json& j, const std::string& key) {
    if (!j.contains(key)) throw io_error("missing field \"" + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw io_error("field \"" + key + "\" has the wrong type");
    }
}

}  // namespace jio

inline json spec_to_json(const VectorFieldSpec& spec) {
    json out;
    out["n"] = spec.n;
    out["k"] = spec.k;
    json lam = json::array(), alp = json::array();
    for (int i = 0; i < spec.n; ++i) {
        lam.push_back(jio::complex_to_json(spec.lambda[i]));
        alp.push_back(jio::complex_to_json(spec.alpha[i]));
    }
    out["lambda"] = lam;
    out["alpha"] = alp;
    out["r"] = spec.r.entries();
    json fs = json::array();
    for (const auto& [j, comps] : spec.f) {
        for (int i = 0; i < spec.n; ++i) {
            if (comps[i].is_zero()) continue;
            json entry;
            entry["i"] = i + 1;
            entry["j"] = j.entries();
            entry["z_coeffs"] = jio::zseries_to_json(comps[i]);
            fs.push_back(entry);
        }
    }
    out["f"] = fs;
    out["trunc"] = {{"N", spec.trunc_N}, {"M", spec.trunc_M}};
    out["tolerances"] = {{"eps_res", spec.tol.eps_res},
                         {"rel_cmp", spec.tol.rel_cmp},
                         {"h3_integer", spec.tol.h3_integer}};
    return out;
}

inline VectorFieldSpec spec_from_json(const json& doc) {
    VectorFieldSpec spec;
    spec.n = jio::require<int>(doc, "n");
    spec.k = jio::require<int>(doc, "k");
    if (spec.n < 2) throw io_error("n must be >= 2");
    if (spec.k < 1) throw io_error("k must be >= 1");
    if (!doc.contains("lambda") || !doc["lambda"].is_array() ||
        static_cast<int>(doc["lambda"].size()) != spec.n)
        throw io_error("lambda must be an array of n [re, im] pairs");
    if (!doc.contains("alpha") || !doc["alpha"].is_array() ||
        static_cast<int>(doc["alpha"].size()) != spec.n)
        throw io_error("alpha must be an array of n [re, im] pairs");
    for (const auto& e : doc["lambda"]) spec.lambda.push_back(jio::complex_from_json(e, "lambda"));
    for (const auto& e : doc["alpha"]) spec.alpha.push_back(jio::complex_from_json(e, "alpha"));

    auto rv = jio::require<std::vector<int>>(doc, "r");
    if (static_cast<int>(rv.size()) != spec.n) throw io_error("r must have length n");
    for (int v : rv)
        if (v < 0) throw io_error("r entries must be nonnegative");
    spec.r = MultiIndex(rv);

    if (!doc.contains("f") || !doc["f"].is_array()) throw io_error("f must be an array");
    for (const auto& entry : doc["f"]) {
        int i = jio::require<int>(entry, "i");
        if (i < 1 || i > spec.n) throw io_error("f entry: component i out of range");
        auto jv = jio::require<std::vector<int>>(entry, "j");
        if (static_cast<int>(jv.size()) != spec.n) throw io_error("f entry: j must have length n");
        MultiIndex j(jv);
        if (j.degree() < 2) throw io_error("f entry: |j| must be >= 2 (got " + j.str() + ")");
        if (!entry.contains("z_coeffs")) throw io_error("f entry: missing z_coeffs");
        ZSeries zc = jio::zseries_from_json(entry["z_coeffs"], "f z_coeffs");
        auto it = spec.f.find(j);
        if (it == spec.f.end())
            it = spec.f.emplace(j, std::vector<ZSeries>(spec.n, ZSeries::zero(zc.trunc_order()))).first;
        int order = std::max(it->second[i - 1].trunc_order(), zc.trunc_order());
        it->second[i - 1] = zs_add(it->second[i - 1].truncated(order), zc.truncated(order));
    }

    if (!doc.contains("trunc")) throw io_error("missing field \"trunc\"");
    spec.trunc_N = jio::require<int>(doc["trunc"], "N");
    spec.trunc_M = jio::require<int>(doc["trunc"], "M");
    if (doc.contains("tolerances")) {
        const json& t = doc["tolerances"];
        if (t.contains("eps_res")) spec.tol.eps_res = t["eps_res"].get<double>();
        if (t.contains("rel_cmp")) spec.tol.rel_cmp = t["rel_cmp"].get<double>();
        if (t.contains("h3_integer")) spec.tol.h3_integer = t["h3_integer"].get<double>();
    }
    spec.validate();
    return spec;
}

inline VectorFieldSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open spec file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw io_error("malformed JSON in " + path + ": " + e.what());
    }
    return spec_from_json(doc);
}

inline json result_to_json(const NormalizationResult& res, bool emit_borel) {
    json out;
    out["schema"] = "gevreylab/normalization-result/v1";
    out["spec"] = spec_to_json(res.spec);
    out["N"] = res.N;
    out["M"] = res.M;
    auto table = [&](const NormalizationResult::ZTable& tab) {
        json arr = json::array();
        for (const auto& [Q, comps] : tab) {
            json row;
            row["Q"] = Q.entries();
            json cc = json::array();
            for (const auto& s : comps) cc.push_back(jio::zseries_to_json(s));
            row["z"] = cc;
            arr.push_back(row);
        }
        return arr;
    };
    out["g"] = table(res.g);
    out["t"] = table(res.t);
    if (emit_borel && res.borel_degree >= 1) {
        json borel;
        borel["degree"] = res.borel_degree;
        auto btable = [&](const NormalizationResult::BTable& tab) {
            json arr = json::array();
            for (const auto& [Q, comps] : tab) {
                json row;
                row["Q"] = Q.entries();
                json cc = json::array();
                for (const auto& s : comps) cc.push_back(jio::borel_to_json(s));
                row["series"] = cc;
                arr.push_back(row);
            }
            return arr;
        };
        borel["W"] = btable(res.W);
        borel["U"] = btable(res.U);
        borel["G"] = btable(res.G);
        out["borel"] = borel;
    }
    return out;
}

inline NormalizationResult result_from_json(const json& doc) {
    if (!doc.contains("spec")) throw io_error("result document: missing spec");
    NormalizationResult res;
    res.spec = spec_from_json(doc["spec"]);
    res.N = jio::require<int>(doc, "N");
    res.M = jio::require<int>(doc, "M");
    auto load_table = [&](const json& arr, NormalizationResult::ZTable& tab, const char* what) {
        if (!arr.is_array()) throw io_error(std::string("result document: ") + what + " must be an array");
        for (const auto& row : arr) {
            auto qv = jio::require<std::vector<int>>(row, "Q");
            MultiIndex Q(qv);
            if (!row.contains("z") || !row["z"].is_array() ||
                static_cast<int>(row["z"].size()) != res.spec.n)
                throw io_error(std::string("result document: bad row in ") + what);
            NormalizationResult::VecZ comps;
            for (const auto& zc : row["z"]) comps.push_back(jio::zseries_from_json(zc, what));
            tab.emplace(Q, std::move(comps));
        }
    };
    load_table(jio::require<json>(doc, "g"), res.g, "g");
    load_table(jio::require<json>(doc, "t"), res.t, "t");
    for (const auto& [Q, comps] : res.g) {
        NormalizationResult::VecZ wrow, urow;
        for (int i = 0; i < res.spec.n; ++i) {
            wrow.push_back(zs_shift_up(comps[i], res.spec.k * Q.degree()));
            urow.push_back(zs_shift_up(res.t.at(Q)[i], res.spec.k * Q.degree()));
        }
        res.w.emplace(Q, std::move(wrow));
        res.u.emplace(Q, std::move(urow));
    }
    return res;
}

inline NormalizationResult load_result(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open result file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw io_error("malformed JSON in " + path + ": " + e.what());
    }
    return result_from_json(doc);
}

// ZSeries document for `sum`: {"coeffs": [[re,im],...], "k": 1 (optional)}
inline std::pair<ZSeries, int> load_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open series file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw io_error("malformed JSON in " + path + ": " + e.what());
    }
    if (!doc.contains("coeffs")) throw io_error("series document: missing coeffs");
    ZSeries s = jio::zseries_from_json(doc["coeffs"], "coeffs");
    int k = doc.contains("k") ? doc["k"].get<int>() : 1;
    return {s, k};
}

// FNV-1a over the canonical dump; reports embed it so reruns are checkable.
inline std::string config_hash(const json& config) {
    std::string s = config.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline json provenance(const json& config) {
    json out;
    out["tool"] = kToolName;
    out["version"] = kToolVersion;
    out["config"] = config;
    out["config_hash"] = config_hash(config);
    return out;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    out << text;
}

inline void write_json(const std::string& path, const json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

// ---- report sections ----

inline json resonance_report_json(const ResonanceReport& rep) {
    json out;
    json rz = json::array();
    for (const auto& r : rep.resonances) {
        rz.push_back({{"i", r.i}, {"Q", r.Q.entries()}, {"defect", r.defect}});
    }
    out["resonances"] = rz;
    out["is_one_resonant"] = rep.is_one_resonant;
    out["scan_degree"] = rep.scan_degree;
    if (rep.r) {
        out["r"] = rep.r->entries();
        out["p"] = rep.p;
        out["beta"] = jio::complex_to_json(rep.beta);
        out["ichikawa"] = rep.ichikawa;
    } else {
        out["r"] = nullptr;
    }
    return out;
}

inline json hypothesis_report_json(const HypothesisReport& rep) {
    json out;
    out["H1"] = rep.h1;
    out["H2"] = rep.h2;
    out["H3"] = rep.h3;
    out["H4"] = rep.h4;
    out["H5"] = rep.h5;
    out["H'1"] = rep.hp1;
    out["H'2"] = rep.hp2;
    out["H'3"] = rep.hp3;
    out["scan_degree"] = rep.scan_degree;
    json wit;
    wit["i0"] = rep.i0;
    wit["delta1"] = std::isfinite(rep.delta1) ? json(rep.delta1) : json("inf");
    wit["m0"] = rep.m0;
    wit["delta0"] = std::isfinite(rep.delta0) ? json(rep.delta0) : json("inf");
    wit["m0_found"] = rep.m0_found;
    out["witnesses"] = wit;
    out["offenders"] = rep.offenders;
    return out;
}

inline json wellprepared_report_json(const WellPreparedReport& rep) {
    json out;
    out["ok"] = rep.ok;
    out["beta"] = jio::complex_to_json(rep.beta);
    out["diagnostics"] = rep.diagnostics;
    return out;
}

inline json gevrey_fit_json(const GevreyFit& fit) {
    json out;
    out["s_hat"] = fit.s_hat;
    out["A_hat"] = fit.A_hat;
    out["C_hat"] = fit.C_hat;
    out["residual"] = fit.residual;
    out["window"] = {fit.window_lo, fit.window_hi};
    out["usable_points"] = fit.usable_points;
    out["low_confidence"] = fit.low_confidence;
    return out;
}

inline std::string csv_rho(const RhoResult& rho) {
    std::string out = "m,rho_m\n";
    for (int m = rho.first_m; m <= rho.last_m(); ++m)
        out += std::to_string(m) + "," + std::to_string(rho.value(m)) + "\n";
    return out;
}

inline std::string csv_omega(const OmegaResult& om, const std::vector<double>& bruno) {
    std::string out = "k,omega_k,bruno_partial\n";
    for (std::size_t i = 0; i < om.omega.size(); ++i)
        out += std::to_string(i + 1) + "," + std::to_string(om.omega[i]) + "," +
               std::to_string(bruno[i]) + "\n";
    return out;
}

inline std::string csv_degree_norms(const NormalizationResult& res) {
    std::string out = "N,max_coeff\n";
    for (int N = 0; N <= res.M; ++N) {
        double mx = 0.0;
        for (const auto& [Q, comps] : res.g)
            for (const auto& s : comps) mx = std::max(mx, std::abs(s.coeff(N)));
        out += std::to_string(N) + "," + std::to_string(mx) + "\n";
    }
    return out;
}

inline std::string csv_gevrey(const NormalizationGevrey& ng) {
    std::string out = "N,h_N,envelope\n";
    for (std::size_t N = 0; N < ng.h.size(); ++N) {
        double env = ng.fit.C_hat * std::pow(ng.fit.A_hat, double(N)) *
                     std::exp(std::lgamma(1.0 + double(N) * ng.fit.s_hat));
        out += std::to_string(N) + "," + std::to_string(ng.h[N]) + "," + std::to_string(env) + "\n";
    }
    return out;
}

}  // namespace gevreylab

#endif
