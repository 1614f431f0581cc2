#include "doctest.h"

#include "prophet/instance.hpp"
#include "prophet/report.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "test_support.hpp"

using namespace prophet;
using namespace test_support;

namespace {

namespace fs = std::filesystem;

const fs::path& scratch_dir()
{
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() /
                 ("prophet_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

struct RunResult {
    int code;
    std::string output;
};

RunResult run_cli(const std::string& args)
{
    static int counter = 0;
    const fs::path capture = scratch_dir() / ("capture_" + std::to_string(counter++) + ".txt");
    const std::string cmd =
        std::string(PROPHET_CLI_PATH) + " " + args + " > " + capture.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(capture);
    std::ostringstream text;
    text << in.rdbuf();
    return {code, text.str()};
}

fs::path write_file(const std::string& name, const std::string& content)
{
    const fs::path path = scratch_dir() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

fs::path instance_file(const std::string& name, const Instance& inst)
{
    const fs::path path = scratch_dir() / name;
    save_instance(inst, path);
    return path;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

}  // namespace

TEST_CASE("solve-prices passes on an xos instance and exports artifacts")
{
    auto inst = instance_file("pair.json", xos_pair());
    const auto lp_path = scratch_dir() / "pair_primal.lp";
    const auto dual_path = scratch_dir() / "pair_dual.lp";
    const auto cert_path = scratch_dir() / "pair_cert.json";
    const auto report_path = scratch_dir() / "pair_report.json";

    auto r = run_cli("solve-prices " + inst.string() + " --export-lp " + lp_path.string() +
                     " --export-dual-lp " + dual_path.string() + " --export-certificate " +
                     cert_path.string() + " --output " + report_path.string());
    CHECK(r.code == 0);
    CHECK(r.output.find("PASS") != std::string::npos);
    CHECK(r.output.find("alpha=2") != std::string::npos);

    CHECK(slurp(lp_path).rfind("Maximize", 0) == 0);
    CHECK(slurp(dual_path).rfind("Minimize", 0) == 0);

    auto report = report_from_json(nlohmann::json::parse(slurp(report_path)));
    CHECK(report.parameter_class == "xos");
    CHECK(report.primal_objective >= -1e-9);
    CHECK(report.prices.size() == 2);

    // the exported certificate verifies cleanly
    auto v = run_cli("verify-dual " + inst.string() + " --certificate " + cert_path.string());
    CHECK(v.code == 0);
    CHECK(v.output.find("PASS") != std::string::npos);
}

TEST_CASE("solve-prices fails the gate when alpha is out of reach")
{
    auto inst = instance_file("tight.json", tightness_instance());
    auto r = run_cli("solve-prices " + inst.string() + " --alpha 1.8 --beta 1");
    CHECK(r.code == 1);
    CHECK(r.output.find("FAIL") != std::string::npos);
    CHECK(r.output.find("parameters custom") != std::string::npos);
}

TEST_CASE("broken inputs exit with a usage error")
{
    auto malformed = write_file("broken.json", "this is not json");
    CHECK(run_cli("solve-prices " + malformed.string()).code == 2);

    CHECK(run_cli("solve-prices " + (scratch_dir() / "missing.json").string()).code == 2);

    auto inst = instance_file("unit.json", single_item_unit());
    auto bad_prices = write_file("bad_prices.json", "[-0.5]");
    CHECK(run_cli("simulate " + inst.string() + " --prices " + bad_prices.string() +
                  " --exact")
              .code == 2);

    // price count must match the universe
    auto short_prices = write_file("short_prices.json", "[0.5]");
    auto pair = instance_file("pair2.json", xos_pair());
    CHECK(run_cli("simulate " + pair.string() + " --prices " + short_prices.string() +
                  " --exact")
              .code == 2);

    // prices and samples/exact selections are mandatory
    CHECK(run_cli("simulate " + inst.string() + " --exact").code == 2);
    CHECK(run_cli("simulate " + inst.string() + " --prices " + short_prices.string()).code == 2);
    CHECK(run_cli("verify-dual " + inst.string()).code == 2);

    CHECK(run_cli("params --class nonsense").code == 2);
    CHECK(run_cli("--bogus-flag").code == 2);
    CHECK(run_cli("").code == 2);  // a subcommand is required
    CHECK(run_cli("--help").code == 0);
}

TEST_CASE("simulate with lp prices meets the ratio gate exactly")
{
    auto inst = instance_file("tight_sim.json", tightness_instance());
    auto ok = run_cli("simulate " + inst.string() + " --from-lp --exact");
    CHECK(ok.code == 0);
    CHECK(ok.output.find("PASS (ratio <= alpha + tolerance)") != std::string::npos);

    // alpha = 1.8 is impossible on this instance: the gate must fail
    auto bad = run_cli("simulate " + inst.string() + " --from-lp --exact --alpha 1.8 --beta 1");
    CHECK(bad.code == 1);
    CHECK(bad.output.find("FAIL") != std::string::npos);
}

TEST_CASE("simulate accepts a plain price file and a report file")
{
    auto inst = instance_file("unit_sim.json", single_item_unit());
    auto prices = write_file("half.json", "[0.5]");
    auto r = run_cli("simulate " + inst.string() + " --prices " + prices.string() + " --exact");
    CHECK(r.code == 0);
    CHECK(r.output.find("expected welfare: 1") != std::string::npos);

    // a solve-prices report doubles as a price file
    const auto report_path = scratch_dir() / "unit_report.json";
    REQUIRE(run_cli("solve-prices " + inst.string() + " --output " + report_path.string())
                .code == 0);
    auto from_report =
        run_cli("simulate " + inst.string() + " --prices " + report_path.string() + " --exact");
    CHECK(from_report.code == 0);
}

TEST_CASE("monte carlo simulation is reproducible per seed")
{
    auto inst = instance_file("tight_mc.json", tightness_instance());
    auto prices = write_file("steep.json", "[1.5]");
    const auto out_a = scratch_dir() / "mc_a.json";
    const auto out_b = scratch_dir() / "mc_b.json";
    const auto out_c = scratch_dir() / "mc_c.json";

    const std::string base = "simulate " + inst.string() + " --prices " + prices.string() +
                             " --samples 2000 --seed 9 --output ";
    REQUIRE(run_cli(base + out_a.string()).code == 0);
    REQUIRE(run_cli(base + out_b.string()).code == 0);
    CHECK(slurp(out_a) == slurp(out_b));

    REQUIRE(run_cli("simulate " + inst.string() + " --prices " + prices.string() +
                    " --samples 2000 --seed 10 --output " + out_c.string())
                .code == 0);
    CHECK(slurp(out_a) != slurp(out_c));

    auto report = report_from_json(nlohmann::json::parse(slurp(out_a)));
    CHECK(report.mc_samples == 2000);
    CHECK(report.welfare_std_error > 0.0);
}

TEST_CASE("verify-dual accepts lp certificates and rejects bad ones")
{
    auto inst = instance_file("unit_verify.json", single_item_unit());
    const auto cert_path = scratch_dir() / "unit_cert.json";

    auto r = run_cli("verify-dual " + inst.string() + " --from-lp --export-certificate " +
                     cert_path.string());
    CHECK(r.code == 0);
    CHECK(r.output.find("PASS") != std::string::npos);
    CHECK(run_cli("verify-dual " + inst.string() + " --certificate " + cert_path.string())
              .code == 0);

    // all mass on the full set violates the membership bound
    auto bad_cert = write_file("point_mass.json", R"({"mu":[{"items":[0],"weight":1.0}]})");
    auto bad = run_cli("verify-dual " + inst.string() + " --certificate " + bad_cert.string());
    CHECK(bad.code == 1);
    CHECK(bad.output.find("FAIL") != std::string::npos);
    CHECK(bad.output.find("eq1 worst margin: -0.5") != std::string::npos);
}

TEST_CASE("params prints the closed forms")
{
    auto all = run_cli("params");
    CHECK(all.code == 0);
    CHECK(all.output.find("single_item k=1 alpha=2 beta=1") != std::string::npos);
    CHECK(all.output.find("xos k=1 alpha=2 beta=1") != std::string::npos);
    CHECK(all.output.find("mph_balanced k=2 alpha=6 beta=0.5") != std::string::npos);
    CHECK(all.output.find("mph_improved k=2") != std::string::npos);

    auto k3 = run_cli("params --class mph-balanced --k 3");
    CHECK(k3.code == 0);
    CHECK(k3.output.find("alpha=10 beta=0.25") != std::string::npos);
    CHECK(k3.output.find("identity_residual=") != std::string::npos);

    CHECK(run_cli("params --class mph-improved --k 1").code == 2);
}

TEST_CASE("report runs the full pipeline")
{
    std::mt19937_64 rng(17);
    auto mph = generate_random_instance(ValuationClass::Mph, 3, 2, 2, 2, rng);
    auto inst = instance_file("mph_report.json", mph);

    const auto csv_path = scratch_dir() / "summary.csv";
    auto r = run_cli("report " + inst.string() + " --class mph-balanced --csv " +
                     csv_path.string());
    CHECK(r.code == 0);

    auto report = report_from_json(nlohmann::json::parse(r.output));
    CHECK(report.parameter_class == "mph_balanced");
    CHECK(report.k == 2);
    CHECK(report.alpha == doctest::Approx(6.0));
    CHECK(report.instance_digest == instance_digest(mph));
    CHECK(report.primal_objective >= -1e-7);
    CHECK(report.achieved_ratio <= 6.0 + 1e-6);
    CHECK(report.checks.at("strong_duality"));
    CHECK(report.checks.at("eq1_feasible"));
    CHECK(report.checks.at("claim1_nonnegative"));
    CHECK(report.passed());

    // csv accumulates: header plus one row per run
    REQUIRE(run_cli("report " + inst.string() + " --class mph-improved --csv " +
                    csv_path.string())
                .code == 0);
    const std::string csv = slurp(csv_path);
    CHECK(csv.rfind(report_csv_header(), 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("scratch cleanup")
{
    std::error_code ec;
    fs::remove_all(scratch_dir(), ec);
    CHECK(!ec);
}
