// gevreylab command-line front end: resonance/hypothesis reports, small-divisor
// profiles, formal normalization, Gevrey fits, and Borel-Laplace summation.
//
// Exit codes: 0 success, 1 input error, 2 hypothesis failure, 3 solve failure,
// 4 fit-domain error, 5 summation-direction error.

#include <iostream>

#include <CLI11.hpp>

#include "gevreylab/gevreylab.hpp"

namespace gl = gevreylab;
using gl::json;

namespace {

int run_resonance(const std::string& spec_path, int max_degree, double eps,
                  const std::string& out_path) {
    gl::VectorFieldSpec spec = gl::load_spec(spec_path);
    spec.tol.eps_res = eps;
    gl::LinearPart lp(spec.lambda);
    gl::ResonanceReport rrep = gl::build_resonance_report(lp, &spec.alpha, max_degree, eps);
    gl::HypothesisReport hrep = gl::check_hypotheses(spec, max_degree);
    gl::WellPreparedReport wrep = gl::check_well_prepared(spec);

    json config = {{"command", "resonance"}, {"spec", spec_path}, {"max_degree", max_degree},
                   {"eps", eps}};
    json report;
    report["resonance"] = gl::resonance_report_json(rrep);
    report["hypotheses"] = gl::hypothesis_report_json(hrep);
    report["well_prepared"] = gl::wellprepared_report_json(wrep);
    report["provenance"] = gl::provenance(config);

    bool ok = rrep.is_one_resonant && wrep.ok && hrep.h1 && hrep.h2 && hrep.h3 && hrep.h4;
    report["hypothesis_failure"] = !ok;
    if (!out_path.empty()) gl::write_json(out_path, report);
    else std::cout << report.dump(2) << "\n";
    return ok ? 0 : 2;
}

int run_smalldiv(const std::string& spec_path, int m_max, int bruno_K, int min_p_degree,
                 int fit_lo, int fit_hi, double eps, double budget, const std::string& csv_prefix,
                 const std::string& out_path) {
    gl::VectorFieldSpec spec = gl::load_spec(spec_path);
    gl::LinearPart lp(spec.lambda);
    gl::SmallDivisorProfile prof =
        gl::small_divisor_profile(lp, bruno_K, m_max, eps, min_p_degree, fit_lo, fit_hi, budget);

    json config = {{"command", "smalldiv"}, {"spec", spec_path},     {"m_max", m_max},
                   {"bruno_K", bruno_K},    {"min_p_degree", min_p_degree},
                   {"fit_lo", fit_lo},      {"fit_hi", fit_hi},      {"eps", eps},
                   {"budget", budget}};
    json report;
    report["omega"] = prof.omega.omega;
    report["bruno_partial_sums"] = prof.bruno_partial_sums;
    report["omega_budget_exceeded"] = prof.omega.budget_exceeded;
    json rho;
    rho["first_m"] = prof.rho.first_m;
    rho["values"] = prof.rho.rho;
    rho["budget_exceeded"] = prof.rho.budget_exceeded;
    report["rho"] = rho;
    report["fit"] = {{"c", prof.fit.c},
                     {"gamma", prof.fit.gamma},
                     {"residual", prof.fit.residual},
                     {"records_used", prof.fit.records_used},
                     {"insufficient_decay_data", prof.fit.insufficient}};
    report["provenance"] = gl::provenance(config);

    if (!csv_prefix.empty()) {
        gl::write_text(csv_prefix + "_rho.csv", gl::csv_rho(prof.rho));
        gl::write_text(csv_prefix + "_omega.csv", gl::csv_omega(prof.omega, prof.bruno_partial_sums));
    }
    if (!out_path.empty()) gl::write_json(out_path, report);
    else std::cout << report.dump(2) << "\n";
    return 0;
}

int run_normalize(const std::string& spec_path, int N, int M, bool emit_borel, bool verify_bounds_f,
                  int borel_degree, bool force, const std::string& out_path,
                  const std::string& report_path, const std::string& csv_path) {
    gl::VectorFieldSpec spec = gl::load_spec(spec_path);
    if (N <= 0) N = spec.trunc_N;
    if (M < 0) M = spec.trunc_M;

    json config = {{"command", "normalize"}, {"spec", spec_path},   {"N", N},
                   {"M", M},                 {"emit_borel", emit_borel},
                   {"verify_bounds", verify_bounds_f}, {"borel_degree", borel_degree},
                   {"force", force}};
    json report;
    report["hypotheses"] = gl::hypothesis_report_json(gl::check_hypotheses(spec, std::max(2, N)));
    report["well_prepared"] = gl::wellprepared_report_json(gl::check_well_prepared(spec));

    gl::NormalizationResult res = gl::formal_normalize(spec, N, M, force);
    report["conjugacy_residual"] = gl::conjugacy_residual(res);
    if (spec.has_r())
        report["monomial_preservation"] = gl::check_monomial_preservation(res, spec.r);

    if (emit_borel || verify_bounds_f) {
        int bd = borel_degree > 0 ? std::min(borel_degree, N) : N;
        gl::compute_borel_tables(res, bd);
        report["borel_degree"] = res.borel_degree;
        report["route_equivalence_defect"] = gl::route_equivalence_defect(res, res.borel_degree);
        if (verify_bounds_f) {
            gl::LinearPart lp(spec.lambda);
            gl::RhoResult rho = gl::rho_sequence(lp, std::max(2 * bd, 16), spec.tol.eps_res);
            gl::DiophantineFit dfit = gl::fit_diophantine_type(rho, 2, rho.last_m());
            gl::BoundFit bf = gl::verify_bounds(res, dfit.c, dfit.gamma);
            report["bound_fit"] = {{"K0", bf.K0_fit},
                                   {"K", bf.K_fit},
                                   {"c0", bf.c0_used},
                                   {"grid", bf.grid},
                                   {"c", dfit.c},
                                   {"gamma", dfit.gamma}};
        }
    }
    report["provenance"] = gl::provenance(config);

    if (!out_path.empty()) gl::write_json(out_path, gl::result_to_json(res, emit_borel));
    if (!csv_path.empty()) gl::write_text(csv_path, gl::csv_degree_norms(res));
    if (!report_path.empty()) gl::write_json(report_path, report);
    else std::cout << report.dump(2) << "\n";
    return 0;
}

int run_gevrey(const std::string& result_path, double R, int window_lo, int window_hi,
               const std::string& gamma_mode, int gamma_m_max, double s_max,
               const std::string& out_path, const std::string& csv_path) {
    gl::NormalizationResult res = gl::load_result(result_path);
    double gamma;
    json gamma_src;
    if (gamma_mode == "from") {
        gl::LinearPart lp(res.spec.lambda);
        gl::RhoResult rho = gl::rho_sequence(lp, gamma_m_max, res.spec.tol.eps_res);
        gl::DiophantineFit dfit = gl::fit_diophantine_type(rho, 2, rho.last_m());
        gamma = dfit.gamma;
        gamma_src = {{"mode", "from"}, {"m_max", gamma_m_max}, {"c", dfit.c},
                     {"gamma", dfit.gamma}, {"insufficient_decay_data", dfit.insufficient}};
    } else {
        try {
            gamma = std::stod(gamma_mode);
        } catch (...) {
            throw gl::io_error("--gamma expects \"from\" or a number");
        }
        gamma_src = {{"mode", "value"}, {"gamma", gamma}};
    }
    if (window_hi < 0) window_hi = res.M;

    gl::NormalizationGevrey ng = gl::gevrey_order_of_normalization(res, R, window_lo, window_hi, s_max);

    json config = {{"command", "gevrey"}, {"result", result_path}, {"R", R},
                   {"window", {window_lo, window_hi}}, {"gamma", gamma_src}, {"s_max", s_max}};
    json out;
    out["fit"] = gl::gevrey_fit_json(ng.fit);
    out["gamma_used"] = gamma;
    out["prediction"] = {{"order", (1.0 + gamma) / double(res.spec.k)},
                         {"formula", "(1+gamma)/k"}};
    out["provenance"] = gl::provenance(config);

    if (!csv_path.empty()) gl::write_text(csv_path, gl::csv_gevrey(ng));
    if (!out_path.empty()) gl::write_json(out_path, out);
    else std::cout << out.dump(2) << "\n";
    return 0;
}

int run_sum(const std::string& series_path, int k_opt, double direction, double z_re, double z_im,
            int pade_L, int pade_M, double tol, const std::string& out_path) {
    auto [series, k_file] = gl::load_series(series_path);
    int k = k_opt > 0 ? k_opt : k_file;
    gl::cplx z(z_re, z_im);
    gl::BorelSumResult sr = gl::borel_sum(series, k, direction, z, pade_L, pade_M, tol);

    json config = {{"command", "sum"}, {"series", series_path}, {"k", k},
                   {"direction", direction}, {"z", {z_re, z_im}},
                   {"pade", {sr.pade.L, sr.pade.Mdeg}}, {"tol", tol}};
    json out;
    out["value"] = gl::jio::complex_to_json(sr.value);
    out["error_estimate"] = sr.error_estimate;
    json poles = json::array();
    for (gl::cplx p : sr.pade.poles) poles.push_back(gl::jio::complex_to_json(p));
    out["pade"] = {{"L", sr.pade.L},
                   {"M", sr.pade.Mdeg},
                   {"poles", poles},
                   {"degree_reduced", sr.pade.degree_reduced},
                   {"spurious_poles", sr.pade.spurious.size()}};
    out["provenance"] = gl::provenance(config);
    if (!out_path.empty()) gl::write_json(out_path, out);
    else std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gevreylab: normal forms, small divisors, and Borel-Laplace summation"};
    app.require_subcommand(1);

    // resonance
    std::string spec_path, out_path, report_path, csv_path;
    int max_degree = 8;
    double eps = 1e-10;
    auto* cres = app.add_subcommand("resonance", "resonance and hypothesis report");
    cres->add_option("spec", spec_path, "spec JSON")->required();
    cres->add_option("--max-degree", max_degree, "resonance scan degree");
    cres->add_option("--eps", eps, "resonance tolerance");
    cres->add_option("-o,--output", out_path, "report path (default: stdout)");

    // smalldiv
    std::string sd_spec, sd_csv, sd_out;
    int m_max = 200, bruno_K = 5, min_p = 1, fit_lo = 2, fit_hi = -1;
    double sd_eps = 1e-10, budget = 1e8;
    auto* csd = app.add_subcommand("smalldiv", "Bruno/rho small-divisor profile");
    csd->add_option("spec", sd_spec, "spec JSON")->required();
    csd->add_option("--m-max", m_max, "largest degree for rho_m");
    csd->add_option("--bruno-K", bruno_K, "number of omega_k terms");
    csd->add_option("--min-p-degree", min_p, "restrict rho to |P| >= this (1 or 2)");
    csd->add_option("--fit-lo", fit_lo, "diophantine fit window start");
    csd->add_option("--fit-hi", fit_hi, "diophantine fit window end (-1 = m_max)");
    csd->add_option("--eps", sd_eps, "zero-divisor exclusion threshold");
    csd->add_option("--budget", budget, "enumeration budget");
    csd->add_option("--csv", sd_csv, "CSV prefix (writes <prefix>_rho.csv, <prefix>_omega.csv)");
    csd->add_option("-o,--output", sd_out, "report path (default: stdout)");

    // normalize
    std::string nm_spec, nm_out, nm_report, nm_csv;
    int N = -1, M = -1, borel_degree = -1;
    bool emit_borel = false, do_bounds = false, force = false;
    auto* cnm = app.add_subcommand("normalize", "formal normalization tables");
    cnm->add_option("spec", nm_spec, "spec JSON")->required();
    cnm->add_option("--N", N, "y-degree truncation (default: spec trunc.N)");
    cnm->add_option("--M", M, "z-order truncation (default: spec trunc.M)");
    cnm->add_flag("--emit-borel", emit_borel, "compute and serialize Borel tables");
    cnm->add_flag("--verify-bounds", do_bounds, "fit K0/K bounds on the Borel tables");
    cnm->add_option("--borel-degree", borel_degree, "Borel table degree (default: N)");
    cnm->add_flag("--force", force, "skip the hypothesis gate");
    cnm->add_option("-o,--output", nm_out, "result JSON path");
    cnm->add_option("--report", nm_report, "report path (default: stdout)");
    cnm->add_option("--csv", nm_csv, "per-degree max coefficient norms CSV");

    // gevrey
    std::string gv_result, gv_out, gv_csv, gv_gamma = "from";
    double R = 0.25, s_max = 4.0;
    std::vector<int> gv_window;
    int gamma_m_max = 100;
    auto* cgv = app.add_subcommand("gevrey", "Gevrey-order fit of a normalization result");
    cgv->add_option("result", gv_result, "normalization result JSON")->required();
    cgv->add_option("--R", R, "polydisk radius for the Q-sum");
    cgv->add_option("--window", gv_window, "fit window lo hi")->expected(2);
    cgv->add_option("--gamma", gv_gamma, "\"from\" (fit rho) or explicit value");
    cgv->add_option("--gamma-m-max", gamma_m_max, "rho scan depth for --gamma from");
    cgv->add_option("--s-max", s_max, "upper bound of the s search");
    cgv->add_option("-o,--output", gv_out, "fit JSON path (default: stdout)");
    cgv->add_option("--csv", gv_csv, "(N, h_N, envelope) CSV");

    // sum
    std::string sm_series, sm_out;
    int sm_k = -1, pade_L = -1, pade_M = -1;
    double direction = 0.0, z_re = 0.1, z_im = 0.0, sm_tol = 1e-11;
    auto* csm = app.add_subcommand("sum", "Borel-Laplace k-sum of a z-series at a point");
    csm->add_option("series", sm_series, "series JSON ({\"coeffs\": [[re,im],...]})")->required();
    csm->add_option("--k", sm_k, "summability order (default: from file, else 1)");
    csm->add_option("--direction", direction, "summation direction (radians)");
    csm->add_option("--z", z_re, "Re z");
    csm->add_option("--z-im", z_im, "Im z");
    csm->add_option("--pade-L", pade_L, "Pade numerator degree (default: diagonal)");
    csm->add_option("--pade-M", pade_M, "Pade denominator degree (default: diagonal)");
    csm->add_option("--tol", sm_tol, "quadrature tolerance");
    csm->add_option("-o,--output", sm_out, "value JSON path (default: stdout)");

    try {
        app.parse(argc, argv);
        if (cres->parsed()) return run_resonance(spec_path, max_degree, eps, out_path);
        if (csd->parsed())
            return run_smalldiv(sd_spec, m_max, bruno_K, min_p, fit_lo, fit_hi, sd_eps, budget,
                                sd_csv, sd_out);
        if (cnm->parsed())
            return run_normalize(nm_spec, N, M, emit_borel, do_bounds, borel_degree, force, nm_out,
                                 nm_report, nm_csv);
        if (cgv->parsed()) {
            int wlo = gv_window.size() == 2 ? gv_window[0] : 3;
            int whi = gv_window.size() == 2 ? gv_window[1] : -1;
            return run_gevrey(gv_result, R, wlo, whi, gv_gamma, gamma_m_max, s_max, gv_out, gv_csv);
        }
        if (csm->parsed())
            return run_sum(sm_series, sm_k, direction, z_re, z_im, pade_L, pade_M, sm_tol, sm_out);
        return 1;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const gl::hypothesis_error& e) {
        std::cerr << "hypothesis failure: " << e.what() << "\n";
        return 2;
    } catch (const gl::solve_error& e) {
        std::cerr << "solve failure: " << e.what() << "\n";
        return 3;
    } catch (const gl::fit_domain_error& e) {
        std::cerr << "fit domain error: " << e.what() << "\n";
        return 4;
    } catch (const gl::summation_error& e) {
        std::cerr << "summation error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
