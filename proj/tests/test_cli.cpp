#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string cli = GEVREYLAB_CLI_PATH;
const std::string data = GEVREYLAB_DATA_DIR;

fs::path tmp_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "gevreylab_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    std::string cmd = cli + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    json doc;
    in >> doc;
    return doc;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("resonance command") {
    fs::path out = tmp_dir() / "res_euler.json";
    CHECK(run("resonance " + data + "/euler2d.json -o " + out.string()) == 0);
    json rep = read_json(out);
    CHECK(rep["resonance"]["is_one_resonant"] == true);
    CHECK(rep["resonance"]["r"] == json::array({1, 1}));
    CHECK(rep["hypotheses"]["H3"] == true);
    CHECK(rep.contains("provenance"));

    fs::path outp = tmp_dir() / "res_poincare.json";
    CHECK(run("resonance " + data + "/poincare.json -o " + outp.string()) == 2);
    json repp = read_json(outp);  // report still written on hypothesis failure
    CHECK(repp["resonance"]["is_one_resonant"] == false);

    fs::path outh = tmp_dir() / "res_h3.json";
    CHECK(run("resonance " + data + "/h3violation.json -o " + outh.string()) == 2);
    CHECK(read_json(outh)["hypotheses"]["H3"] == false);
}

TEST_CASE("input errors exit 1") {
    fs::path bad = tmp_dir() / "bad.json";
    std::ofstream(bad) << "{ this is not json";
    CHECK(run("resonance " + bad.string()) == 1);

    fs::path missing = tmp_dir() / "missing_lambda.json";
    std::ofstream(missing) << R"({"n":2,"k":1,"alpha":[[1,0],[0,0]],"r":[1,1],"f":[],)"
                           << R"("trunc":{"N":4,"M":6}})";
    CHECK(run("resonance " + missing.string()) == 1);

    CHECK(run("resonance " + tmp_dir().string() + "/does_not_exist.json") == 1);
}

TEST_CASE("smalldiv command") {
    fs::path out = tmp_dir() / "sd.json";
    fs::path csv = tmp_dir() / "sd";
    CHECK(run("smalldiv " + data + "/euler2d.json --m-max 50 --csv " + csv.string() + " -o " +
              out.string()) == 0);
    json rep = read_json(out);
    CHECK(rep["fit"]["gamma"] == 0.0);

    std::string rho_csv = read_text(tmp_dir() / "sd_rho.csv");
    CHECK(rho_csv.rfind("m,rho_m\n", 0) == 0);
    CHECK(rho_csv.find("\n2,1.0") != std::string::npos);
    std::string om_csv = read_text(tmp_dir() / "sd_omega.csv");
    CHECK(om_csv.rfind("k,omega_k,bruno_partial\n", 0) == 0);

    CHECK(run("smalldiv " + data + "/euler2d.json --m-max 0") == 1);
}

TEST_CASE("smalldiv gamma fit for the sqrt(2) spectrum") {
    fs::path out = tmp_dir() / "sd3.json";
    CHECK(run("smalldiv " + data + "/smalldiv3d.json --m-max 200 -o " + out.string()) == 0);
    double gamma = read_json(out)["fit"]["gamma"].get<double>();
    CHECK(gamma >= 0.85);
    CHECK(gamma <= 1.15);
}

TEST_CASE("normalize command") {
    fs::path res = tmp_dir() / "euler_result.json";
    fs::path rep = tmp_dir() / "euler_report.json";
    CHECK(run("normalize " + data + "/euler2d.json -o " + res.string() + " --report " +
              rep.string()) == 0);
    json report = read_json(rep);
    CHECK(report["conjugacy_residual"].get<double>() < 1e-9);
    CHECK(report["monomial_preservation"].get<double>() < 1e-10);

    // byte-identical rerun
    fs::path res2 = tmp_dir() / "euler_result2.json";
    fs::path rep2 = tmp_dir() / "euler_report2.json";
    CHECK(run("normalize " + data + "/euler2d.json -o " + res2.string() + " --report " +
              rep2.string()) == 0);
    CHECK(read_text(res) == read_text(res2));
    // reports embed the output paths in config; compare the numeric sections
    json r1 = read_json(rep), r2 = read_json(rep2);
    CHECK(r1["conjugacy_residual"] == r2["conjugacy_residual"]);
    CHECK(r1["hypotheses"] == r2["hypotheses"]);

    CHECK(run("normalize " + data + "/h3violation.json --force") == 3);
    CHECK(run("normalize " + data + "/h5bad.json") == 2);

    fs::path repb = tmp_dir() / "h5bad_report.json";
    CHECK(run("normalize " + data + "/h5bad.json --force --report " + repb.string()) == 0);
    CHECK(read_json(repb)["monomial_preservation"].get<double>() > 1e-4);
}

TEST_CASE("normalize with Borel tables and bounds") {
    fs::path res = tmp_dir() / "euler_borel.json";
    fs::path rep = tmp_dir() / "euler_borel_report.json";
    CHECK(run("normalize " + data + "/euler2d.json --emit-borel --verify-bounds --borel-degree 6 -o " +
              res.string() + " --report " + rep.string()) == 0);
    json report = read_json(rep);
    CHECK(report["route_equivalence_defect"].get<double>() < 1e-10);
    CHECK(report["bound_fit"]["K0"].get<double>() >= 1.0);
    json result = read_json(res);
    CHECK(result.contains("borel"));
}

TEST_CASE("gevrey command") {
    fs::path res = tmp_dir() / "gv_result.json";
    CHECK(run("normalize " + data + "/euler2d.json --M 20 -o " + res.string() + " --report " +
              (tmp_dir() / "gv_norm_report.json").string()) == 0);

    fs::path fit = tmp_dir() / "gv_fit.json";
    fs::path csv = tmp_dir() / "gv.csv";
    CHECK(run("gevrey " + res.string() + " --R 0.25 --window 4 20 --gamma from -o " + fit.string() +
              " --csv " + csv.string()) == 0);
    json doc = read_json(fit);
    double s = doc["fit"]["s_hat"].get<double>();
    CHECK(s >= 0.0);
    CHECK(s <= 4.0);
    CHECK(doc["prediction"]["order"].get<double>() == 1.0);  // gamma = 0, k = 1
    CHECK(read_text(csv).rfind("N,h_N,envelope\n", 0) == 0);

    CHECK(run("gevrey " + res.string() + " --R 50 --window 4 20 --gamma 0") == 4);
}

TEST_CASE("sum command") {
    fs::path out = tmp_dir() / "sum.json";
    CHECK(run("sum " + data + "/euler_series.json --z 0.1 -o " + out.string()) == 0);
    json doc = read_json(out);
    double re = doc["value"][0].get<double>();
    CHECK(std::abs(re - 0.0915633339397881) < 1e-6);

    // the Borel image has its pole at t = -1: direction pi is blocked
    CHECK(run("sum " + data + "/euler_series.json --z 0.1 --direction 3.141592653589793") == 5);

    fs::path poly = tmp_dir() / "poly.json";
    std::ofstream(poly) << R"({"coeffs": [[0,0],[0,0],[1,0]]})";  // z^2
    fs::path pout = tmp_dir() / "poly_sum.json";
    CHECK(run("sum " + poly.string() + " --z 0.2 -o " + pout.string()) == 0);
    CHECK(std::abs(read_json(pout)["value"][0].get<double>() - 0.04) < 1e-8);
}
