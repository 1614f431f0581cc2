#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace prophet {

// One pipeline run flattened into numbers. Unknown fields stay NaN (emitted
// as JSON null, empty CSV cells); mc_samples == 0 means the welfare figure is
// an exact expectation.
struct ExperimentReport {
    static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

    std::string instance_digest;
    std::string parameter_class;  // "xos", "mph_balanced", ... or "custom"
    int k = 1;
    double alpha = kUnset;
    double beta = kUnset;
    double primal_objective = kUnset;
    std::vector<double> prices;
    double expected_welfare = kUnset;
    double welfare_std_error = kUnset;
    std::uint64_t mc_samples = 0;
    double expected_optimum = kUnset;
    double achieved_ratio = kUnset;  // optimum / welfare, welfare > 0
    double dual_objective = kUnset;
    double eq1_worst_margin = kUnset;
    double claim1_worst_margin = kUnset;
    std::map<std::string, bool> checks;

    bool passed() const;  // no failed checks
};

nlohmann::json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);

std::string report_csv_header();
std::string report_csv_row(const ExperimentReport& report);

}  // namespace prophet
