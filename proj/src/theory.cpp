#include "prophet/theory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace prophet {

std::string to_string(ParameterClass cls)
{
    switch (cls) {
        case ParameterClass::SingleItem: return "single_item";
        case ParameterClass::Xos: return "xos";
        case ParameterClass::MphBalanced: return "mph_balanced";
        case ParameterClass::MphImproved: return "mph_improved";
    }
    return "unknown";
}

ClassParameters parameters_for(ParameterClass cls, int k)
{
    switch (cls) {
        case ParameterClass::SingleItem: return {cls, 1, Parameters(2.0, 1.0)};
        case ParameterClass::Xos: return {cls, 1, Parameters(2.0, 1.0)};
        case ParameterClass::MphBalanced:
            if (k < 2) throw std::domain_error("parameters_for: MPH variants need k >= 2");
            return {cls, k, Parameters(4.0 * k - 2.0, 1.0 / (2.0 * (k - 1)))};
        case ParameterClass::MphImproved: {
            if (k < 2) throw std::domain_error("parameters_for: MPH variants need k >= 2");
            const double kd = k;
            return {cls, k,
                    Parameters(2.0 * kd + 2.0 * std::sqrt(kd * (kd - 1.0)) - 1.0,
                               std::sqrt(kd / (kd - 1.0)) - 1.0)};
        }
    }
    throw std::invalid_argument("parameters_for: unknown class");
}

ClassParameters parameters_for_instance(const Instance& inst, MphVariant variant)
{
    if (inst.valuation_class() == ValuationClass::Xos || inst.k() == 1)
        return parameters_for(ParameterClass::Xos);
    return parameters_for(variant == MphVariant::Balanced ? ParameterClass::MphBalanced
                                                          : ParameterClass::MphImproved,
                          inst.k());
}

double mph_identity_residual(int k, double alpha, double beta)
{
    return (1.0 - k * beta / (1.0 + beta)) - 1.0 / (alpha * beta);
}

double check_claim1(const DualCertificate& cert, const Valuation& v, Bundle s,
                    const Parameters& params)
{
    double surviving = 0.0;
    for (std::size_t t = 0; t < cert.weights().size(); ++t) {
        const double mu = cert.weights()[t];
        if (mu == 0.0) continue;
        surviving += mu * evaluate(v, s - Bundle(static_cast<std::uint32_t>(t)));
    }
    return surviving - evaluate(v, s) / (params.alpha * params.beta);
}

Claim1Margin claim1_worst_margin(const DualCertificate& cert, const Instance& inst,
                                 const Parameters& params)
{
    if (cert.num_items() != inst.num_items())
        throw std::invalid_argument("claim1_worst_margin: certificate universe mismatch");
    Claim1Margin worst{std::numeric_limits<double>::infinity(), -1, 0, Bundle()};
    for (int i = 0; i < inst.num_agents(); ++i) {
        const auto& support = inst.agent(static_cast<std::size_t>(i)).support();
        for (std::size_t sp = 0; sp < support.size(); ++sp) {
            for_each_subset(Bundle::full(inst.num_items()), [&](Bundle s) {
                const double margin = check_claim1(cert, support[sp].valuation, s, params);
                if (margin < worst.margin) worst = {margin, i, sp, s};
            });
        }
    }
    return worst;
}

double check_hyperedge_survival(const DualCertificate& cert, Bundle x, int k, double beta)
{
    if (x.size() > k)
        throw std::invalid_argument("check_hyperedge_survival: |X| exceeds k");
    double survive = 0.0;
    for (std::size_t t = 0; t < cert.weights().size(); ++t)
        if (!Bundle(static_cast<std::uint32_t>(t)).intersects(x)) survive += cert.weights()[t];
    return survive - (1.0 - k * beta / (1.0 + beta));
}

}  // namespace prophet
