// prophet-prices: solve for static anonymous item prices, simulate the
// sequential posted-price mechanism, and verify dual certificates.
//
// Exit codes: 0 = all checks passed, 1 = a theory check failed, 2 = input or
// solver error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prophet/mechanism.hpp"
#include "prophet/report.hpp"
#include "prophet/theory.hpp"

using namespace prophet;

namespace {

std::string fmt(double x)
{
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.10g", x);
    return buffer;
}

std::string fmt_vector(const std::vector<double>& xs)
{
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) out += ", ";
        out += fmt(xs[i]);
    }
    return out + "]";
}

struct ResolvedParams {
    std::string name;  // class label for reports; "custom" for explicit pairs
    int k;
    Parameters params;
};

ResolvedParams from_class_params(const ClassParameters& cp)
{
    return {to_string(cp.cls), cp.k, cp.params};
}

// --class wins unless an explicit --alpha/--beta pair is given.
ResolvedParams resolve_parameters(const Instance& inst, const std::string& cls, double alpha,
                                  double beta)
{
    if (!std::isnan(alpha) || !std::isnan(beta)) {
        if (std::isnan(alpha) || std::isnan(beta))
            throw std::invalid_argument("--alpha and --beta must be given together");
        return {"custom", inst.k(), Parameters(alpha, beta)};
    }
    if (cls == "auto") return from_class_params(parameters_for_instance(inst));
    if (cls == "xos") return from_class_params(parameters_for(ParameterClass::Xos));
    if (cls == "single-item" || cls == "single_item")
        return from_class_params(parameters_for(ParameterClass::SingleItem));
    if (cls == "mph-balanced" || cls == "mph_balanced")
        return from_class_params(parameters_for(ParameterClass::MphBalanced, inst.k()));
    if (cls == "mph-improved" || cls == "mph_improved")
        return from_class_params(parameters_for(ParameterClass::MphImproved, inst.k()));
    throw std::invalid_argument("unknown --class \"" + cls + "\"");
}

PriceVector load_prices(const std::string& path, int num_items)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open prices file " + path);
    nlohmann::json j;
    in >> j;
    if (j.is_object() && j.contains("prices")) j = j.at("prices");
    auto values = j.get<std::vector<double>>();
    if (static_cast<int>(values.size()) != num_items)
        throw std::invalid_argument("prices file holds " + std::to_string(values.size()) +
                                    " entries for " + std::to_string(num_items) + " items");
    return PriceVector(std::move(values));
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

void emit_report(const ExperimentReport& report, const std::string& output_path,
                 const std::string& csv_path, bool json_to_stdout)
{
    const std::string text = report_to_json(report).dump(2) + "\n";
    if (!output_path.empty())
        write_text_file(output_path, text);
    else if (json_to_stdout)
        std::cout << text;
    if (!csv_path.empty()) {
        const bool fresh = !std::ifstream(csv_path).good();
        std::ofstream out(csv_path, std::ios::app);
        if (!out) throw std::runtime_error("cannot open " + csv_path + " for writing");
        if (fresh) out << report_csv_header() << "\n";
        out << report_csv_row(report) << "\n";
    }
}

// Solves the primal; the solver can never legitimately report infeasible
// here (p = 0 with a large lminus is always feasible), so anything but
// Optimal is an error.
LpSolution solve_primal_checked(const OptStats& stats, const Parameters& params)
{
    LpSolution sol = solve_lp(build_primal(stats, params));
    if (sol.status != LpStatus::Optimal)
        throw std::runtime_error("primal solve " + to_string(sol.status) + ": " + sol.message);
    return sol;
}

LpSolution solve_dual_checked(const OptStats& stats, const Parameters& params)
{
    LpSolution sol = solve_lp(build_dual(stats, params));
    if (sol.status != LpStatus::Optimal)
        throw std::runtime_error("dual solve " + to_string(sol.status) + ": " + sol.message);
    return sol;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Static anonymous item prices for combinatorial prophet inequalities"};
    app.require_subcommand(1);

    double tolerance = 1e-7;
    app.add_option("--tolerance", tolerance, "pass/fail tolerance")->capture_default_str();

    const double unset = std::numeric_limits<double>::quiet_NaN();

    // ---- solve-prices ----
    auto* solve_cmd = app.add_subcommand("solve-prices", "build and solve the price LP");
    std::string solve_instance, solve_class = "auto", solve_output, solve_csv, solve_lp_path,
                solve_dual_lp_path, solve_cert_path;
    double solve_alpha = unset, solve_beta = unset;
    solve_cmd->add_option("instance", solve_instance, "instance file")->required();
    solve_cmd->add_option("--class", solve_class,
                          "parameter class: auto|xos|single-item|mph-balanced|mph-improved");
    solve_cmd->add_option("--alpha", solve_alpha, "explicit target ratio");
    solve_cmd->add_option("--beta", solve_beta, "explicit utility weight");
    solve_cmd->add_option("--output", solve_output, "write the JSON report here");
    solve_cmd->add_option("--csv", solve_csv, "append a CSV summary row here");
    solve_cmd->add_option("--export-lp", solve_lp_path, "write the primal in LP text format");
    solve_cmd->add_option("--export-dual-lp", solve_dual_lp_path,
                          "write the dual in LP text format");
    solve_cmd->add_option("--export-certificate", solve_cert_path,
                          "solve the dual and write its certificate");

    // ---- simulate ----
    auto* sim_cmd = app.add_subcommand("simulate", "run the posted-price mechanism");
    std::string sim_instance, sim_prices_path, sim_class = "auto", sim_output, sim_csv;
    double sim_alpha = unset, sim_beta = unset;
    bool sim_from_lp = false, sim_exact = false;
    std::uint64_t sim_samples = 0, sim_seed = 1;
    sim_cmd->add_option("instance", sim_instance, "instance file")->required();
    auto* sim_prices_opt = sim_cmd->add_option("--prices", sim_prices_path,
                                               "JSON price vector or report file");
    sim_cmd->add_flag("--from-lp", sim_from_lp, "price via the primal LP solve")
        ->excludes(sim_prices_opt);
    auto* sim_exact_opt = sim_cmd->add_flag("--exact", sim_exact, "exact expectation");
    sim_cmd->add_option("--samples", sim_samples, "Monte Carlo sample count")
        ->excludes(sim_exact_opt);
    sim_cmd->add_option("--seed", sim_seed, "Monte Carlo seed")->capture_default_str();
    sim_cmd->add_option("--class", sim_class, "parameter class for the ratio gate");
    sim_cmd->add_option("--alpha", sim_alpha, "explicit target ratio");
    sim_cmd->add_option("--beta", sim_beta, "explicit utility weight");
    sim_cmd->add_option("--output", sim_output, "write the JSON report here");
    sim_cmd->add_option("--csv", sim_csv, "append a CSV summary row here");

    // ---- verify-dual ----
    auto* verify_cmd = app.add_subcommand("verify-dual", "check a dual certificate");
    std::string verify_instance, verify_cert_path, verify_class = "auto", verify_output,
                verify_csv, verify_export_cert;
    double verify_alpha = unset, verify_beta = unset;
    bool verify_from_lp = false;
    verify_cmd->add_option("instance", verify_instance, "instance file")->required();
    auto* verify_cert_opt =
        verify_cmd->add_option("--certificate", verify_cert_path, "certificate file");
    verify_cmd->add_flag("--from-lp", verify_from_lp, "certify via the dual LP solve")
        ->excludes(verify_cert_opt);
    verify_cmd->add_option("--class", verify_class, "parameter class");
    verify_cmd->add_option("--alpha", verify_alpha, "explicit target ratio");
    verify_cmd->add_option("--beta", verify_beta, "explicit utility weight");
    verify_cmd->add_option("--export-certificate", verify_export_cert,
                           "write the checked certificate here");
    verify_cmd->add_option("--output", verify_output, "write the JSON report here");
    verify_cmd->add_option("--csv", verify_csv, "append a CSV summary row here");

    // ---- params ----
    auto* params_cmd = app.add_subcommand("params", "print closed-form (alpha, beta) pairs");
    std::string params_class;
    int params_k = 2;
    params_cmd->add_option("--class", params_class,
                           "xos|single-item|mph-balanced|mph-improved (default: all)");
    params_cmd->add_option("--k", params_k, "k for the MPH variants")->capture_default_str();

    // ---- report ----
    auto* report_cmd = app.add_subcommand("report", "full pipeline with pass/fail checks");
    std::string report_instance, report_class = "auto", report_output, report_csv;
    double report_alpha = unset, report_beta = unset;
    std::uint64_t report_samples = 100000, report_seed = 1;
    report_cmd->add_option("instance", report_instance, "instance file")->required();
    report_cmd->add_option("--class", report_class, "parameter class");
    report_cmd->add_option("--alpha", report_alpha, "explicit target ratio");
    report_cmd->add_option("--beta", report_beta, "explicit utility weight");
    report_cmd->add_option("--samples", report_samples,
                           "Monte Carlo samples when enumeration is infeasible")
        ->capture_default_str();
    report_cmd->add_option("--seed", report_seed, "Monte Carlo seed")->capture_default_str();
    report_cmd->add_option("--output", report_output, "write the JSON report here");
    report_cmd->add_option("--csv", report_csv, "append a CSV summary row here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(solve_cmd)) {
            const Instance inst = load_instance(solve_instance);
            const ResolvedParams rp =
                resolve_parameters(inst, solve_class, solve_alpha, solve_beta);
            const OptStats stats = opt_stats(inst);
            if (!solve_lp_path.empty())
                write_text_file(solve_lp_path, write_lp_format(build_primal(stats, rp.params)));
            if (!solve_dual_lp_path.empty())
                write_text_file(solve_dual_lp_path,
                                write_lp_format(build_dual(stats, rp.params)));
            const LpSolution sol = solve_primal_checked(stats, rp.params);
            const PrimalPrices prices = prices_from_primal(sol, inst.num_items());
            if (!solve_cert_path.empty()) {
                const LpSolution dual = solve_dual_checked(stats, rp.params);
                save_certificate(certificate_from_dual(dual, inst.num_items()), solve_cert_path);
            }

            ExperimentReport report;
            report.instance_digest = instance_digest(inst);
            report.parameter_class = rp.name;
            report.k = rp.k;
            report.alpha = rp.params.alpha;
            report.beta = rp.params.beta;
            report.primal_objective = prices.objective;
            report.prices = prices.prices.values();
            report.expected_optimum = stats.expected_optimum;
            report.checks["primal_objective_nonnegative"] = prices.objective >= -tolerance;

            std::cout << "instance " << report.instance_digest << ": " << inst.num_items()
                      << " items, " << inst.num_agents() << " agents\n"
                      << "parameters " << rp.name << ": alpha=" << fmt(rp.params.alpha)
                      << " beta=" << fmt(rp.params.beta) << "\n"
                      << "primal objective: " << fmt(prices.objective) << "\n"
                      << "prices: " << fmt_vector(prices.prices.values()) << "\n"
                      << (report.passed() ? "PASS" : "FAIL")
                      << " (objective >= " << fmt(-tolerance) << ")\n";
            emit_report(report, solve_output, solve_csv, false);
            return report.passed() ? 0 : 1;
        }

        if (app.got_subcommand(sim_cmd)) {
            const Instance inst = load_instance(sim_instance);
            if (!sim_exact && sim_samples == 0)
                throw std::invalid_argument("choose --exact or --samples N");
            if (sim_prices_path.empty() && !sim_from_lp)
                throw std::invalid_argument("choose --prices or --from-lp");

            ExperimentReport report;
            report.instance_digest = instance_digest(inst);
            const OptStats stats = opt_stats(inst);
            report.expected_optimum = stats.expected_optimum;

            std::optional<ResolvedParams> rp;
            if (sim_from_lp || !std::isnan(sim_alpha) || sim_class != "auto")
                rp = resolve_parameters(inst, sim_class, sim_alpha, sim_beta);
            PriceVector prices;
            if (sim_from_lp) {
                const LpSolution sol = solve_primal_checked(stats, rp->params);
                const PrimalPrices lp_prices = prices_from_primal(sol, inst.num_items());
                report.primal_objective = lp_prices.objective;
                prices = lp_prices.prices;
            } else {
                prices = load_prices(sim_prices_path, inst.num_items());
            }
            report.prices = prices.values();
            if (rp) {
                report.parameter_class = rp->name;
                report.k = rp->k;
                report.alpha = rp->params.alpha;
                report.beta = rp->params.beta;
            }

            double welfare;
            if (sim_exact) {
                welfare = expected_welfare_exact(inst, prices);
                report.expected_welfare = welfare;
            } else {
                const MonteCarloEstimate mc =
                    expected_welfare_monte_carlo(inst, prices, sim_samples, sim_seed);
                welfare = mc.mean;
                report.expected_welfare = mc.mean;
                report.welfare_std_error = mc.standard_error;
                report.mc_samples = mc.samples;
            }
            report.achieved_ratio =
                welfare > 0.0 ? stats.expected_optimum / welfare
                              : std::numeric_limits<double>::quiet_NaN();

            std::cout << "instance " << report.instance_digest << "\n"
                      << "expected welfare: " << fmt(welfare);
            if (!sim_exact) std::cout << " +- " << fmt(report.welfare_std_error) << " s.e.";
            std::cout << "\nexpected optimum: " << fmt(stats.expected_optimum) << "\n"
                      << "achieved ratio: " << fmt(report.achieved_ratio) << "\n";

            if (rp) {
                const bool ratio_ok =
                    !std::isnan(report.achieved_ratio) &&
                    report.achieved_ratio <= rp->params.alpha + tolerance;
                report.checks["ratio_within_alpha"] = ratio_ok;
                std::cout << (ratio_ok ? "PASS" : "FAIL") << " (ratio <= alpha + tolerance)\n";
            }
            emit_report(report, sim_output, sim_csv, false);
            return report.passed() ? 0 : 1;
        }

        if (app.got_subcommand(verify_cmd)) {
            const Instance inst = load_instance(verify_instance);
            if (verify_cert_path.empty() && !verify_from_lp)
                throw std::invalid_argument("choose --certificate or --from-lp");
            const ResolvedParams rp =
                resolve_parameters(inst, verify_class, verify_alpha, verify_beta);
            const OptStats stats = opt_stats(inst);

            std::optional<DualCertificate> cert;
            if (verify_from_lp) {
                const LpSolution dual = solve_dual_checked(stats, rp.params);
                cert = certificate_from_dual(dual, inst.num_items());
            } else {
                cert = load_certificate(verify_cert_path, inst.num_items());
            }
            if (!verify_export_cert.empty()) save_certificate(*cert, verify_export_cert);

            const std::vector<double> eq1 = check_dual_feasible(*cert, rp.params);
            const double eq1_worst = *std::min_element(eq1.begin(), eq1.end());
            const Claim1Margin claim1 = claim1_worst_margin(*cert, inst, rp.params);
            const double objective = dual_objective(*cert, stats, rp.params);

            ExperimentReport report;
            report.instance_digest = instance_digest(inst);
            report.parameter_class = rp.name;
            report.k = rp.k;
            report.alpha = rp.params.alpha;
            report.beta = rp.params.beta;
            report.expected_optimum = stats.expected_optimum;
            report.dual_objective = objective;
            report.eq1_worst_margin = eq1_worst;
            report.claim1_worst_margin = claim1.margin;
            report.checks["eq1_feasible"] = eq1_worst >= -tolerance;
            report.checks["claim1_nonnegative"] = claim1.margin >= -tolerance;
            report.checks["dual_objective_nonnegative"] = objective >= -tolerance;

            std::cout << "instance " << report.instance_digest << "\n"
                      << "parameters " << rp.name << ": alpha=" << fmt(rp.params.alpha)
                      << " beta=" << fmt(rp.params.beta) << "\n"
                      << "eq1 worst margin: " << fmt(eq1_worst) << "\n"
                      << "claim1 worst margin: " << fmt(claim1.margin) << " (agent "
                      << claim1.agent << ", support " << claim1.support_point << ", S="
                      << claim1.s.to_string() << ")\n"
                      << "dual objective: " << fmt(objective) << "\n"
                      << (report.passed() ? "PASS" : "FAIL") << "\n";
            emit_report(report, verify_output, verify_csv, false);
            return report.passed() ? 0 : 1;
        }

        if (app.got_subcommand(params_cmd)) {
            auto print_row = [](const ClassParameters& cp) {
                std::cout << to_string(cp.cls) << " k=" << cp.k
                          << " alpha=" << fmt(cp.params.alpha) << " beta=" << fmt(cp.params.beta);
                if (cp.cls == ParameterClass::MphBalanced ||
                    cp.cls == ParameterClass::MphImproved)
                    std::cout << " identity_residual="
                              << fmt(mph_identity_residual(cp.k, cp.params.alpha,
                                                           cp.params.beta));
                std::cout << "\n";
            };
            if (params_class.empty()) {
                print_row(parameters_for(ParameterClass::SingleItem));
                print_row(parameters_for(ParameterClass::Xos));
                print_row(parameters_for(ParameterClass::MphBalanced, params_k));
                print_row(parameters_for(ParameterClass::MphImproved, params_k));
            } else if (params_class == "xos") {
                print_row(parameters_for(ParameterClass::Xos));
            } else if (params_class == "single-item" || params_class == "single_item") {
                print_row(parameters_for(ParameterClass::SingleItem));
            } else if (params_class == "mph-balanced" || params_class == "mph_balanced") {
                print_row(parameters_for(ParameterClass::MphBalanced, params_k));
            } else if (params_class == "mph-improved" || params_class == "mph_improved") {
                print_row(parameters_for(ParameterClass::MphImproved, params_k));
            } else {
                throw std::invalid_argument("unknown --class \"" + params_class + "\"");
            }
            return 0;
        }

        if (app.got_subcommand(report_cmd)) {
            const Instance inst = load_instance(report_instance);
            const ResolvedParams rp =
                resolve_parameters(inst, report_class, report_alpha, report_beta);
            const OptStats stats = opt_stats(inst);

            const LpSolution primal = solve_primal_checked(stats, rp.params);
            const PrimalPrices prices = prices_from_primal(primal, inst.num_items());
            const LpSolution dual = solve_dual_checked(stats, rp.params);
            const DualCertificate cert = certificate_from_dual(dual, inst.num_items());

            ExperimentReport report;
            report.instance_digest = instance_digest(inst);
            report.parameter_class = rp.name;
            report.k = rp.k;
            report.alpha = rp.params.alpha;
            report.beta = rp.params.beta;
            report.primal_objective = prices.objective;
            report.prices = prices.prices.values();
            report.expected_optimum = stats.expected_optimum;
            report.dual_objective = dual.objective;

            double welfare, ratio_slack = 0.0;
            if (inst.profile_count() <= kDefaultProfileCap) {
                welfare = expected_welfare_exact(inst, prices.prices);
                report.expected_welfare = welfare;
            } else {
                const MonteCarloEstimate mc = expected_welfare_monte_carlo(
                    inst, prices.prices, report_samples, report_seed);
                welfare = mc.mean;
                report.expected_welfare = mc.mean;
                report.welfare_std_error = mc.standard_error;
                report.mc_samples = mc.samples;
                // 3 s.e. of welfare noise, propagated through optimum/welfare
                if (welfare > 0.0)
                    ratio_slack = 3.0 * mc.standard_error * stats.expected_optimum /
                                  (welfare * welfare);
            }
            report.achieved_ratio =
                welfare > 0.0 ? stats.expected_optimum / welfare
                              : std::numeric_limits<double>::quiet_NaN();

            const std::vector<double> eq1 = check_dual_feasible(cert, rp.params);
            report.eq1_worst_margin = *std::min_element(eq1.begin(), eq1.end());
            report.claim1_worst_margin = claim1_worst_margin(cert, inst, rp.params).margin;

            report.checks["primal_objective_nonnegative"] = prices.objective >= -tolerance;
            report.checks["strong_duality"] =
                std::abs(primal.objective - dual.objective) <= 1e-7;
            report.checks["ratio_within_alpha"] =
                welfare > 0.0
                    ? report.achieved_ratio <= rp.params.alpha + tolerance + ratio_slack
                    : stats.expected_optimum <= tolerance;
            report.checks["eq1_feasible"] = report.eq1_worst_margin >= -tolerance;
            report.checks["claim1_nonnegative"] = report.claim1_worst_margin >= -tolerance;
            report.checks["dual_objective_nonnegative"] = dual.objective >= -tolerance;

            emit_report(report, report_output, report_csv, true);
            return report.passed() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
