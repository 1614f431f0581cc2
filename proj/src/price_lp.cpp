#include "prophet/price_lp.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace prophet {

namespace {

constexpr double kWeightSumTol = 1e-9;
constexpr double kClampTol = 1e-9;

std::size_t subset_count(int num_items)
{
    if (num_items < 1 || num_items > kMaxLpItems)
        throw std::invalid_argument("subset construction supports 1.." +
                                    std::to_string(kMaxLpItems) + " items");
    return std::size_t{1} << num_items;
}

double clamp_tiny_negative(double x, const char* what)
{
    if (x >= 0.0) return x;
    if (x >= -kClampTol) return 0.0;
    throw std::runtime_error(std::string(what) + ": negative value " + std::to_string(x));
}

}  // namespace

Parameters::Parameters(double alpha, double beta) : alpha(alpha), beta(beta)
{
    if (!std::isfinite(alpha) || alpha < 1.0)
        throw std::invalid_argument("Parameters: alpha must be finite and >= 1");
    if (!std::isfinite(beta) || beta <= 0.0 || beta > 1.0)
        throw std::invalid_argument("Parameters: beta must lie in (0, 1]");
}

DualCertificate::DualCertificate(int num_items, std::vector<double> weights)
    : num_items_(num_items), weights_(std::move(weights))
{
    if (weights_.size() != subset_count(num_items_))
        throw std::invalid_argument("DualCertificate: expected one weight per subset");
    double total = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0)
            throw std::invalid_argument("DualCertificate: weights must be finite and >= 0");
        total += w;
    }
    if (std::abs(total - 1.0) > kWeightSumTol)
        throw std::invalid_argument("DualCertificate: weights must sum to 1");
}

double DualCertificate::absence_probability(int item) const
{
    if (item < 0 || item >= num_items_)
        throw std::out_of_range("DualCertificate: item index out of range");
    double p = 0.0;
    for (std::size_t t = 0; t < weights_.size(); ++t)
        if ((t >> item & 1u) == 0) p += weights_[t];
    return p;
}

double marginal_absence_prob(const DualCertificate& cert, int item)
{
    return cert.absence_probability(item);
}

namespace {

// beta*1{j not in T} - 1{j in T}
double item_coefficient(int item, std::size_t t_bits, double beta)
{
    return (t_bits >> item & 1u) != 0 ? -1.0 : beta;
}

std::vector<double> constraint_rhs(const OptStats& stats, const Parameters& params)
{
    const std::size_t count = subset_count(stats.num_items());
    std::vector<double> rhs(count);
    for (std::size_t t = 0; t < count; ++t)
        rhs[t] = params.beta *
                     expected_residual_optimum(stats, Bundle(static_cast<std::uint32_t>(t))) -
                 stats.expected_optimum / params.alpha;
    return rhs;
}

}  // namespace

LinearProgramSpec build_primal(const OptStats& stats, const Parameters& params)
{
    const int m = stats.num_items();
    const std::size_t count = subset_count(m);

    LinearProgramSpec lp;
    lp.sense = ObjectiveSense::Maximize;
    lp.objective.assign(static_cast<std::size_t>(m) + 2, 0.0);
    lp.objective[static_cast<std::size_t>(m)] = 1.0;
    lp.objective[static_cast<std::size_t>(m) + 1] = -1.0;
    for (int j = 0; j < m; ++j) lp.variable_names.push_back("p" + std::to_string(j));
    lp.variable_names.push_back("lplus");
    lp.variable_names.push_back("lminus");

    lp.rhs = constraint_rhs(stats, params);
    lp.rows.reserve(count);
    lp.row_senses.assign(count, RowSense::LessEqual);
    for (std::size_t t = 0; t < count; ++t) {
        std::vector<double> row(static_cast<std::size_t>(m) + 2);
        for (int j = 0; j < m; ++j)
            row[static_cast<std::size_t>(j)] = item_coefficient(j, t, params.beta);
        row[static_cast<std::size_t>(m)] = 1.0;
        row[static_cast<std::size_t>(m) + 1] = -1.0;
        lp.rows.push_back(std::move(row));
    }
    return lp;
}

LinearProgramSpec build_dual(const OptStats& stats, const Parameters& params)
{
    const int m = stats.num_items();
    const std::size_t count = subset_count(m);

    LinearProgramSpec lp;
    lp.sense = ObjectiveSense::Minimize;
    lp.objective = constraint_rhs(stats, params);
    lp.variable_names.reserve(count);
    for (std::size_t t = 0; t < count; ++t)
        lp.variable_names.push_back("muT_" + std::to_string(t));

    lp.rows.reserve(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j < m; ++j) {
        std::vector<double> row(count);
        for (std::size_t t = 0; t < count; ++t) row[t] = item_coefficient(j, t, params.beta);
        lp.rows.push_back(std::move(row));
        lp.row_senses.push_back(RowSense::GreaterEqual);
        lp.rhs.push_back(0.0);
    }
    lp.rows.emplace_back(count, 1.0);
    lp.row_senses.push_back(RowSense::Equal);
    lp.rhs.push_back(1.0);
    return lp;
}

LinearProgramSpec build_primal(const Instance& inst, const Parameters& params)
{
    return build_primal(opt_stats(inst), params);
}

LinearProgramSpec build_dual(const Instance& inst, const Parameters& params)
{
    return build_dual(opt_stats(inst), params);
}

PrimalPrices prices_from_primal(const LpSolution& sol, int num_items)
{
    if (sol.status != LpStatus::Optimal)
        throw std::runtime_error("prices_from_primal: solution status is " +
                                 to_string(sol.status));
    if (sol.values.size() != static_cast<std::size_t>(num_items) + 2)
        throw std::invalid_argument("prices_from_primal: variable count mismatch");
    std::vector<double> prices(static_cast<std::size_t>(num_items));
    for (int j = 0; j < num_items; ++j)
        prices[static_cast<std::size_t>(j)] =
            clamp_tiny_negative(sol.values[static_cast<std::size_t>(j)], "prices_from_primal");
    const double slack = sol.values[static_cast<std::size_t>(num_items)] -
                         sol.values[static_cast<std::size_t>(num_items) + 1];
    return {PriceVector(std::move(prices)), slack};
}

DualCertificate certificate_from_dual(const LpSolution& sol, int num_items)
{
    if (sol.status != LpStatus::Optimal)
        throw std::runtime_error("certificate_from_dual: solution status is " +
                                 to_string(sol.status));
    if (sol.values.size() != subset_count(num_items))
        throw std::invalid_argument("certificate_from_dual: variable count mismatch");
    std::vector<double> mu(sol.values.size());
    for (std::size_t t = 0; t < mu.size(); ++t)
        mu[t] = clamp_tiny_negative(sol.values[t], "certificate_from_dual");
    return DualCertificate(num_items, std::move(mu));
}

std::vector<double> check_dual_feasible(const DualCertificate& cert, const Parameters& params)
{
    const double threshold = 1.0 / (1.0 + params.beta);
    std::vector<double> margins(static_cast<std::size_t>(cert.num_items()));
    for (int j = 0; j < cert.num_items(); ++j)
        margins[static_cast<std::size_t>(j)] = cert.absence_probability(j) - threshold;
    return margins;
}

double dual_objective(const DualCertificate& cert, const OptStats& stats,
                      const Parameters& params)
{
    if (cert.num_items() != stats.num_items())
        throw std::invalid_argument("dual_objective: certificate universe mismatch");

    // reordered form: per profile, per agent, average over T of the surviving
    // value of the agent's optimal bundle
    double reordered = 0.0;
    for (std::size_t p = 0; p < stats.num_profiles(); ++p) {
        const ValuationProfile& profile = stats.profiles[p];
        double inner = 0.0;
        for (std::size_t i = 0; i < profile.num_agents(); ++i) {
            const Bundle s = stats.optima[p].bundle(i);
            const Valuation& v = profile.v(i);
            double surviving = 0.0;
            for (std::size_t t = 0; t < cert.weights().size(); ++t) {
                const double mu = cert.weights()[t];
                if (mu == 0.0) continue;
                surviving += mu * evaluate(v, s - Bundle(static_cast<std::uint32_t>(t)));
            }
            inner += params.beta * surviving - evaluate(v, s) / params.alpha;
        }
        reordered += profile.probability * inner;
    }

    // direct form: mu-weighted constraint right-hand sides
    double direct = 0.0;
    for (std::size_t t = 0; t < cert.weights().size(); ++t) {
        const double mu = cert.weights()[t];
        if (mu == 0.0) continue;
        const Bundle tb(static_cast<std::uint32_t>(t));
        direct += mu * (params.beta * expected_residual_optimum(stats, tb) -
                        stats.expected_optimum / params.alpha);
    }

    if (std::abs(reordered - direct) > 1e-9 * std::max(1.0, std::abs(direct)))
        throw std::logic_error("dual_objective: summation-order cross-check failed");
    return reordered;
}

double dual_objective(const DualCertificate& cert, const Instance& inst, const Parameters& params)
{
    return dual_objective(cert, opt_stats(inst), params);
}

ConstraintMargin verify_feasible_point(const OptStats& stats, const Parameters& params,
                                       const PriceVector& prices)
{
    if (prices.num_items() != stats.num_items())
        throw std::invalid_argument("verify_feasible_point: price universe mismatch");
    const std::size_t count = subset_count(stats.num_items());
    ConstraintMargin worst{std::numeric_limits<double>::infinity(), Bundle()};
    for (std::size_t t = 0; t < count; ++t) {
        const Bundle tb(static_cast<std::uint32_t>(t));
        double lhs = 0.0;
        for (int j = 0; j < stats.num_items(); ++j)
            lhs += prices.price(j) * item_coefficient(j, t, params.beta);
        const double rhs = params.beta * expected_residual_optimum(stats, tb) -
                           stats.expected_optimum / params.alpha;
        const double margin = rhs - lhs;
        if (margin < worst.margin) worst = {margin, tb};
    }
    return worst;
}

ConstraintMargin verify_feasible_point(const Instance& inst, const Parameters& params,
                                       const PriceVector& prices)
{
    return verify_feasible_point(opt_stats(inst), params, prices);
}

PriceVector fgl_prices(const OptStats& stats)
{
    std::vector<double> prices(static_cast<std::size_t>(stats.num_items()), 0.0);
    for (std::size_t p = 0; p < stats.num_profiles(); ++p) {
        const ValuationProfile& profile = stats.profiles[p];
        for (std::size_t i = 0; i < profile.num_agents(); ++i) {
            const Bundle s = stats.optima[p].bundle(i);
            if (s.empty()) continue;
            const Valuation& v = profile.v(i);
            const AdditiveFunction* clause = nullptr;
            if (const auto* add = std::get_if<AdditiveFunction>(&v))
                clause = add;
            else if (const auto* xos = std::get_if<XOSFunction>(&v))
                clause = &supporting_additive(*xos, s);
            else
                throw std::invalid_argument(
                    "fgl_prices: supporting clauses require additive or xos valuations");
            for (int j : s.items())
                prices[static_cast<std::size_t>(j)] +=
                    0.5 * profile.probability * clause->weight(j);
        }
    }
    return PriceVector(std::move(prices));
}

DualCertificate random_feasible_certificate(int num_items, double beta, std::mt19937_64& rng)
{
    if (!(beta > 0.0) || beta > 1.0)
        throw std::invalid_argument("random_feasible_certificate: beta must lie in (0, 1]");
    const std::size_t count = subset_count(num_items);

    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> mu(count);
    double total = 0.0;
    for (double& w : mu) {
        w = exp1(rng);
        total += w;
    }
    for (double& w : mu) w /= total;

    // membership cap beta/(1+beta) per item; shifting T -> T\{j} preserves
    // every other item's marginal, so feasibilized items stay feasible
    const double cap = beta / (1.0 + beta);
    for (int j = 0; j < num_items; ++j) {
        double inside = 0.0;
        for (std::size_t t = 0; t < count; ++t)
            if ((t >> j & 1u) != 0) inside += mu[t];
        if (inside <= cap || inside == 0.0) continue;
        const double keep = cap / inside;
        for (std::size_t t = 0; t < count; ++t) {
            if ((t >> j & 1u) == 0) continue;
            const double moved = mu[t] * (1.0 - keep);
            mu[t] -= moved;
            mu[t & ~(std::size_t{1} << j)] += moved;
        }
    }

    // restore an exact unit sum after the arithmetic above
    total = 0.0;
    for (double w : mu) total += w;
    for (double& w : mu) w /= total;
    return DualCertificate(num_items, std::move(mu));
}

nlohmann::json certificate_to_json(const DualCertificate& cert)
{
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t t = 0; t < cert.weights().size(); ++t) {
        if (cert.weights()[t] == 0.0) continue;
        entries.push_back(nlohmann::json{
            {"items", Bundle(static_cast<std::uint32_t>(t)).items()},
            {"weight", cert.weights()[t]}});
    }
    return nlohmann::json{{"mu", entries}};
}

DualCertificate certificate_from_json(const nlohmann::json& j, int num_items)
{
    std::vector<double> mu(subset_count(num_items), 0.0);
    for (const auto& entry : j.at("mu")) {
        Bundle t;
        for (const auto& item : entry.at("items")) {
            const int idx = item.get<int>();
            if (idx < 0 || idx >= num_items)
                throw std::invalid_argument("certificate: item index outside the universe");
            t = t.with(idx);
        }
        mu[t.bits()] += entry.at("weight").get<double>();
    }
    return DualCertificate(num_items, std::move(mu));
}

DualCertificate load_certificate(const std::filesystem::path& path, int num_items)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_certificate: cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("load_certificate: " + path.string() + ": " + e.what());
    }
    return certificate_from_json(j, num_items);
}

void save_certificate(const DualCertificate& cert, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("save_certificate: cannot open " + path.string());
    out << certificate_to_json(cert).dump(2) << "\n";
}

}  // namespace prophet
