#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "glsim/harness.hpp"
#include "glsim/report.hpp"
#include "glsim/spectral_field.hpp"

using glsim::ExperimentSpec;
using glsim::format_double;
using glsim::Json;
using glsim::SimConfig;
using glsim::SpectralField;

namespace fs = std::filesystem;
using njson = nlohmann::json;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::vector<njson> parse_rows(const fs::path& path) {
    std::ifstream is(path);
    REQUIRE(is.good());
    std::vector<njson> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        rows.push_back(njson::parse(line));
    }
    return rows;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::path("harness_test_out") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("doubles survive the text round trip exactly") {
    const std::vector<double> values{0.0,
                                     0.1,
                                     1.0 / 3.0,
                                     -2.5e17,
                                     1e-300,
                                     39.478417604357432,
                                     5e-324,
                                     1.7976931348623157e308,
                                     -1.2345678901234567e-5};
    for (double v : values) {
        CAPTURE(v);
        // strtod, not stod: stod throws on subnormals because glibc flags
        // ERANGE while still returning the correctly rounded value
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::signbit(std::strtod(format_double(-0.0).c_str(), nullptr)));
}

TEST_CASE("emitted rows parse back with exact values") {
    Json j = Json::object();
    j.set("flag", Json::boolean(true));
    j.set("count", Json::integer(-42));
    j.set("value", Json::real(1.0 / 3.0));
    j.set("nothing", Json::null());
    j.set("inf_maps_to_null", Json::real(std::numeric_limits<double>::infinity()));
    j.set("nan_maps_to_null", Json::real(std::nan("")));
    j.set("text", Json::str("quote\" slash\\ nl\n tab\t bell\x07 plain"));
    Json arr = Json::array();
    arr.push(Json::real(0.1));
    arr.push(Json::str("x"));
    j.set("items", std::move(arr));
    j.set("nested", Json::object().set("k", Json::integer(7)));
    j.set("grid", Json::array_of({1.5, -2.5}));

    const std::string text = j.dump();
    const njson parsed = njson::parse(text);
    CHECK(parsed["flag"] == true);
    CHECK(parsed["count"] == -42);
    CHECK(parsed["value"].get<double>() == 1.0 / 3.0);
    CHECK(parsed["nothing"].is_null());
    CHECK(parsed["inf_maps_to_null"].is_null());
    CHECK(parsed["nan_maps_to_null"].is_null());
    CHECK(parsed["text"].get<std::string>() == "quote\" slash\\ nl\n tab\t bell\x07 plain");
    CHECK(parsed["items"][0].get<double>() == 0.1);
    CHECK(parsed["items"][1] == "x");
    CHECK(parsed["nested"]["k"] == 7);
    CHECK(parsed["grid"][1].get<double>() == -2.5);

    // keys come out in insertion order, not sorted
    CHECK(text.find("\"flag\"") < text.find("\"count\""));
    CHECK(text.find("\"count\"") < text.find("\"value\""));
    CHECK(text.find("\"text\"") < text.find("\"items\""));
}

TEST_CASE("trajectory CSV layout") {
    glsim::Trajectory traj;
    traj.times = {0.0, 0.5};
    traj.norm_x_h = {1.0, 0.25};
    traj.norm_x_h_delta = {2.0, 0.5};
    traj.norm_y_h = {1.0, 0.125};
    traj.norm_z_v = {0.0, 1.0 / 3.0};
    traj.functional_track["b_func"] = {4.0, 5.0};
    traj.functional_track["a_func"] = {2.0, 3.0};

    std::ostringstream os;
    glsim::write_trajectory_csv(os, traj);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "time,normH,normHdelta,normY,normZV,a_func,b_func");
    REQUIRE(std::getline(is, line));
    CHECK(line == "0,1,2,1,0,2,4");
    REQUIRE(std::getline(is, line));
    CHECK(line.rfind("0.5,0.25,0.5,0.125,", 0) == 0);
    CHECK(line.find(format_double(1.0 / 3.0)) != std::string::npos);
    CHECK_FALSE(std::getline(is, line));
}

TEST_CASE("survival CSV layout") {
    std::ostringstream os;
    glsim::write_survival_csv(os, {{0, 10, 1.0}, {1, 5, 0.5}});
    CHECK(os.str() == "n,count,survival\n0,10,1\n1,5,0.5\n");
}

TEST_CASE("manifest carries the run identity and wall time") {
    const fs::path dir = fresh_dir("manifest");
    const fs::path path = dir / "m.json";
    SimConfig cfg;
    glsim::write_manifest(path.string(), "noise-test", glsim::config_json(cfg), 1.25);
    const njson m = njson::parse(slurp(path));
    CHECK(m["experiment"] == "noise-test");
    CHECK(m["code_version"] == glsim::kCodeVersion);
    CHECK(m["wall_seconds"].get<double>() == 1.25);
    CHECK(m["config"]["K"] == 32);
    CHECK(m["config"]["dt"].get<double>() == 1e-3);
    CHECK(m["config"]["alpha"].get<double>() == 1.8);
    CHECK(m["config"]["beta"].get<double>() == 0.8);
    CHECK(m["config"]["delta"].get<double>() == 0.25);
    CHECK(m["config"]["p"].get<double>() == 0.3);
    CHECK(m["config"].contains("record_stride"));
    CHECK(m["config"].contains("noise_scale"));
    CHECK(m["config"].contains("T"));
}

TEST_CASE("admissibility gate names the violated inequality") {
    SimConfig cfg;
    CHECK_NOTHROW(glsim::require_admissible(cfg));

    cfg.alpha = 1.4;
    cfg.beta = 0.9;
    CHECK_THROWS_MATCHES(glsim::require_admissible(cfg), glsim::hypothesis_error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("alpha in (3/2, 2)")));

    cfg.alpha = 1.9;
    cfg.beta = 0.7;  // lower bound is 1/2 + 1/(2 * 1.9) = 0.763
    CHECK_THROWS_MATCHES(glsim::require_admissible(cfg), glsim::hypothesis_error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("1/2 + 1/(2 alpha)")));

    cfg.alpha = 1.6;
    cfg.beta = 0.875;  // upper bound is 3/2 - 1/1.6 = 0.875, not strict
    CHECK_THROWS_MATCHES(glsim::require_admissible(cfg), glsim::hypothesis_error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("3/2 - 1/alpha")));
}

TEST_CASE("functional registry") {
    SimConfig cfg;
    SpectralField x = SpectralField::zero(4);
    x.a[0] = 0.3;
    x.b[2] = -0.4;
    const double h = glsim::norm_h(x);

    const auto one = glsim::functional_by_name("one", cfg);
    CHECK(one.f(x) == 1.0);
    CHECK(one.sup == 1.0);

    const auto nh = glsim::functional_by_name("norm_h", cfg);
    CHECK(nh.f(x) == h);
    CHECK(std::isinf(nh.sup));

    const auto nhd = glsim::functional_by_name("norm_h_delta", cfg);
    CHECK(nhd.f(x) == glsim::norm_sobolev(x, cfg.delta));

    const auto expf = glsim::functional_by_name("exp_neg_h2", cfg);
    CHECK(expf.f(x) == Catch::Approx(std::exp(-h * h)).epsilon(1e-15));
    CHECK(expf.sup == 1.0);

    const auto tanhf = glsim::functional_by_name("tanh_h2", cfg);
    CHECK(tanhf.f(x) == Catch::Approx(std::tanh(h * h)).epsilon(1e-15));
    CHECK(tanhf.sup == 1.0);

    CHECK_THROWS_MATCHES(
        glsim::functional_by_name("bogus", cfg), glsim::usage_error,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("known:")));
}

TEST_CASE("exit code contract") {
    CHECK(glsim::kExitOk == 0);
    CHECK(glsim::kExitHypothesis == 2);
    CHECK(glsim::kExitEstimation == 3);
    CHECK(glsim::kExitUsage == 64);
}

TEST_CASE("experiment runner rejects bad invocations") {
    ExperimentSpec spec;
    spec.name = "frobnicate";
    spec.out_path = "x.jsonl";
    CHECK_THROWS_AS(glsim::run_experiment(spec), glsim::usage_error);

    spec.name = "noise-test";
    spec.out_path.clear();
    CHECK_THROWS_AS(glsim::run_experiment(spec), glsim::usage_error);

    spec.out_path = "x.jsonl";
    spec.workers = 0;
    CHECK_THROWS_AS(glsim::run_experiment(spec), glsim::usage_error);
}

TEST_CASE("hypothesis violations surface before any work") {
    ExperimentSpec spec;
    spec.name = "ou-probe";
    spec.out_path = "unused.jsonl";
    spec.theta = 0.9;  // limit is beta - 1/(2 alpha) = 0.522...
    CHECK_THROWS_AS(glsim::run_experiment(spec), glsim::hypothesis_error);
    spec.theta = 0.5;
    spec.probe_p = 2.0;  // needs p < alpha
    CHECK_THROWS_AS(glsim::run_experiment(spec), glsim::hypothesis_error);
}

TEST_CASE("noise-test report: valid rows, manifest, and rerun stability") {
    const fs::path dir = fresh_dir("noise");
    ExperimentSpec spec;
    spec.name = "noise-test";
    spec.noise_alphas = {1.8, 2.0};
    spec.cf_points = {0.5, 1.0};
    spec.noise_n = 20000;
    spec.out_path = (dir / "a.jsonl").string();
    REQUIRE(glsim::run_experiment(spec) == 0);

    const auto rows = parse_rows(spec.out_path);
    // 2 alphas x 2 points + the alpha = 2 variance row + the max_abs_err row
    REQUIRE(rows.size() == 6);
    double max_err = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const njson& r = rows[i];
        CHECK(r["experiment"] == "noise-test");
        CHECK(r["seed"] == 1);
        CHECK(r["config"]["K"] == 32);
        const double ecf = r["ecf"].get<double>();
        const double target = r["target"].get<double>();
        CHECK(target == std::exp(-std::pow(std::abs(r["t"].get<double>()),
                                           r["alpha"].get<double>())));
        CHECK(r["abs_err"].get<double>() == Catch::Approx(std::abs(ecf - target)).margin(1e-16));
        CHECK(r["abs_err"].get<double>() < 0.05);
        CHECK(r["n"] == 20000);
        max_err = std::max(max_err, r["abs_err"].get<double>());
    }
    CHECK(rows[4]["statistic"] == "variance");
    CHECK(rows[4]["target"].get<double>() == 2.0);
    CHECK(std::abs(rows[4]["value"].get<double>() - 2.0) < 0.1);
    CHECK(rows[5]["statistic"] == "max_abs_err");
    CHECK(rows[5]["value"].get<double>() == max_err);

    const njson manifest = njson::parse(slurp(spec.out_path + ".manifest.json"));
    CHECK(manifest["experiment"] == "noise-test");
    CHECK(manifest["config"]["master_seed"] == 1);
    CHECK(manifest["config"]["workers"] == 1);
    CHECK(manifest["wall_seconds"].get<double>() >= 0.0);

    // the same seed writes the same bytes
    ExperimentSpec again = spec;
    again.out_path = (dir / "b.jsonl").string();
    REQUIRE(glsim::run_experiment(again) == 0);
    CHECK(slurp(spec.out_path) == slurp(again.out_path));
}

TEST_CASE("moment-probe report is byte-identical across worker counts") {
    const fs::path dir = fresh_dir("moment");
    ExperimentSpec spec;
    spec.name = "moment-probe";
    spec.cfg.K = 8;
    spec.cfg.T = 0.05;
    spec.initial_norms = {0.0, 1.0};
    spec.moment_n_traj = 4;
    spec.out_path = (dir / "w1.jsonl").string();
    REQUIRE(glsim::run_experiment(spec) == 0);

    ExperimentSpec par = spec;
    par.workers = 4;
    par.out_path = (dir / "w4.jsonl").string();
    REQUIRE(glsim::run_experiment(par) == 0);
    CHECK(slurp(spec.out_path) == slurp(par.out_path));

    const auto rows = parse_rows(spec.out_path);
    // 2 moment cells + ratio row + 2 ybound cells + summary row
    REQUIRE(rows.size() == 6);
    CHECK(rows[0]["x0_norm"].get<double>() == 0.0);
    CHECK(rows[1]["x0_norm"].get<double>() == 1.0);
    CHECK(rows[0]["estimate"].get<double>() >= 0.0);
    CHECK(rows[2]["statistic"] == "ratio_max_min");
    CHECK(rows[2]["c_hat"].get<double>() ==
          std::max(rows[0]["estimate"].get<double>(), rows[1]["estimate"].get<double>()));
    CHECK(rows[3]["statistic"] == "ybound");
    CHECK(rows[3]["k_hat"].get<double>() >= 1.0);
    CHECK(rows[5]["statistic"] == "ybound_all_pass");
}

TEST_CASE("occupation report rows") {
    const fs::path dir = fresh_dir("occupation");
    ExperimentSpec spec;
    spec.name = "occupation";
    spec.cfg.K = 8;
    spec.occupation_t = 2.0;
    spec.start_norms = {0.0, 1.0};
    spec.out_path = (dir / "occ.jsonl").string();
    REQUIRE(glsim::run_experiment(spec) == 0);

    const auto rows = parse_rows(spec.out_path);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0]["functional"] == "exp_neg_h2");
    CHECK(rows[0]["x0_norm"].get<double>() == 0.0);
    CHECK(rows[0]["average"].get<double>() > 0.0);
    CHECK(rows[0]["average"].get<double>() <= 1.0);
    CHECK(rows[0]["config"]["T"].get<double>() == 2.0);  // horizon echo
    CHECK(rows[2]["max_diff"].get<double>() >= 0.0);
    CHECK(rows[2]["combined_se"].get<double>() > 0.0);
    CHECK(rows[2].contains("agree_3se"));
}

TEST_CASE("simulate writes the trajectory CSV and a summary") {
    const fs::path dir = fresh_dir("simulate");
    ExperimentSpec spec;
    spec.name = "simulate";
    spec.cfg.K = 4;
    spec.cfg.T = 0.05;
    spec.cfg.record_stride = 10;
    spec.x0_norm = 0.5;
    spec.out_path = (dir / "traj.csv").string();
    REQUIRE(glsim::run_experiment(spec) == 0);

    std::istringstream is(slurp(spec.out_path));
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "time,normH,normHdelta,normY,normZV");
    std::size_t n_rows = 0;
    double first_norm = -1.0;
    while (std::getline(is, line)) {
        if (n_rows == 0) {
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            first_norm = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        }
        ++n_rows;
    }
    CHECK(n_rows == 6);  // t = 0, 0.01, ..., 0.05
    CHECK(first_norm == Catch::Approx(0.5).epsilon(1e-12));

    const njson summary = njson::parse(slurp(spec.out_path + ".summary.jsonl"));
    CHECK(summary["experiment"] == "simulate");
    CHECK(summary["x0_norm"].get<double>() == 0.5);
    CHECK(summary["c_star"].is_number());
    CHECK(summary["k_hat"].get<double>() >= 1.0);
    CHECK(summary["ybound_pass"].is_boolean());
    CHECK(njson::parse(slurp(spec.out_path + ".manifest.json"))["experiment"] == "simulate");
}

TEST_CASE("comparison families survive four-decade starts") {
    // Start norms cycle up to ~316: the largest needs a refined first step,
    // and its fitted Kc reaches ~1e5, where the closed form must stay finite
    // over a full unit horizon.
    for (std::uint64_t seed : {1ull, 2ull, 7ull}) {
        ExperimentSpec spec;
        spec.master_seed = seed;
        spec.comparison_n_traj = 8;
        const glsim::ComparisonExperimentReport r = glsim::comparison_experiment(spec);
        INFO("seed " << seed);
        CHECK(r.zero_noise.n == 8);
        CHECK(r.noisy.n == 8);
        CHECK(r.zero_noise.n_pass == 8);
        CHECK(r.noisy.n_pass == 8);
        CHECK(r.pass_fraction == 1.0);
        CHECK(r.pass);
    }
}
