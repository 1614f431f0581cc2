#include "prophet/report.hpp"

#include <cmath>
#include <cstdio>

namespace prophet {

namespace {

using nlohmann::json;

json number_or_null(double x)
{
    if (std::isnan(x)) return nullptr;
    return x;
}

double number_from(const json& j, const char* key)
{
    if (!j.contains(key) || j.at(key).is_null()) return ExperimentReport::kUnset;
    return j.at(key).get<double>();
}

std::string csv_cell(double x)
{
    if (std::isnan(x)) return "";
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.12g", x);
    return buffer;
}

}  // namespace

bool ExperimentReport::passed() const
{
    for (const auto& [name, ok] : checks)
        if (!ok) return false;
    return true;
}

json report_to_json(const ExperimentReport& report)
{
    json j{{"instance_digest", report.instance_digest},
           {"parameter_class", report.parameter_class},
           {"k", report.k},
           {"alpha", number_or_null(report.alpha)},
           {"beta", number_or_null(report.beta)},
           {"primal_objective", number_or_null(report.primal_objective)},
           {"prices", report.prices},
           {"expected_welfare", number_or_null(report.expected_welfare)},
           {"welfare_std_error", number_or_null(report.welfare_std_error)},
           {"mc_samples", report.mc_samples},
           {"expected_optimum", number_or_null(report.expected_optimum)},
           {"achieved_ratio", number_or_null(report.achieved_ratio)},
           {"dual_objective", number_or_null(report.dual_objective)},
           {"eq1_worst_margin", number_or_null(report.eq1_worst_margin)},
           {"claim1_worst_margin", number_or_null(report.claim1_worst_margin)},
           {"checks", report.checks},
           {"passed", report.passed()}};
    return j;
}

ExperimentReport report_from_json(const json& j)
{
    ExperimentReport report;
    report.instance_digest = j.value("instance_digest", std::string());
    report.parameter_class = j.value("parameter_class", std::string());
    report.k = j.value("k", 1);
    report.alpha = number_from(j, "alpha");
    report.beta = number_from(j, "beta");
    report.primal_objective = number_from(j, "primal_objective");
    if (j.contains("prices") && j.at("prices").is_array())
        report.prices = j.at("prices").get<std::vector<double>>();
    report.expected_welfare = number_from(j, "expected_welfare");
    report.welfare_std_error = number_from(j, "welfare_std_error");
    report.mc_samples = j.value("mc_samples", std::uint64_t{0});
    report.expected_optimum = number_from(j, "expected_optimum");
    report.achieved_ratio = number_from(j, "achieved_ratio");
    report.dual_objective = number_from(j, "dual_objective");
    report.eq1_worst_margin = number_from(j, "eq1_worst_margin");
    report.claim1_worst_margin = number_from(j, "claim1_worst_margin");
    if (j.contains("checks"))
        report.checks = j.at("checks").get<std::map<std::string, bool>>();
    return report;
}

std::string report_csv_header()
{
    return "digest,class,k,alpha,beta,primal_objective,welfare,welfare_se,mc_samples,"
           "optimum,ratio,dual_objective,eq1_margin,claim1_margin,passed";
}

std::string report_csv_row(const ExperimentReport& report)
{
    std::string row = report.instance_digest + "," + report.parameter_class + "," +
                      std::to_string(report.k) + "," + csv_cell(report.alpha) + "," +
                      csv_cell(report.beta) + "," + csv_cell(report.primal_objective) + "," +
                      csv_cell(report.expected_welfare) + "," +
                      csv_cell(report.welfare_std_error) + "," +
                      std::to_string(report.mc_samples) + "," +
                      csv_cell(report.expected_optimum) + "," +
                      csv_cell(report.achieved_ratio) + "," + csv_cell(report.dual_objective) +
                      "," + csv_cell(report.eq1_worst_margin) + "," +
                      csv_cell(report.claim1_worst_margin) + "," +
                      (report.passed() ? "1" : "0");
    return row;
}

}  // namespace prophet
