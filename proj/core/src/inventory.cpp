#include "driftwalk/inventory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace driftwalk {

namespace {

void validate(const SupplyPolicy& policy, const DemandModel& demand) {
    if (!(demand.sigma > 0.0) || !std::isfinite(demand.sigma)) {
        throw std::domain_error("demand sigma must be positive and finite");
    }
    if (!(demand.mu >= 0.0) || !std::isfinite(demand.mu)) {
        throw std::domain_error("demand mu must be nonnegative and finite");
    }
    if (!(policy.alpha >= 0.0 && policy.alpha <= 1.0)) {
        throw std::domain_error("policy alpha must lie in [0, 1]");
    }
    if (!std::isfinite(policy.kappa)) {
        throw std::domain_error("policy kappa must be finite");
    }
}

}  // namespace

double supply_schedule(const SupplyPolicy& policy, const DemandModel& demand,
                       long n) {
    validate(policy, demand);
    if (n < 1) {
        throw std::domain_error("period index must be >= 1");
    }
    // Difference of cumulative band values, so partial sums of the schedule
    // reproduce mu*n + kappa*sigma*n^alpha without accumulated drift.
    const double band = std::pow(static_cast<double>(n), policy.alpha) -
                        std::pow(static_cast<double>(n - 1), policy.alpha);
    return demand.mu + policy.kappa * demand.sigma * band;
}

PathOutcome evolve_path(const std::vector<double>& noise,
                        const SupplyPolicy& policy, const DemandModel& demand) {
    validate(policy, demand);
    if (noise.empty()) {
        throw std::domain_error("noise sequence must be nonempty");
    }
    for (double z : noise) {
        if (!std::isfinite(z)) {
            throw std::domain_error("noise values must be finite");
        }
    }

    const std::size_t n = noise.size();
    PathOutcome out;
    out.net_demand.resize(n);
    out.lost.resize(n);
    out.inventory_ls.resize(n);
    out.backlog.resize(n);
    out.inventory_bo.resize(n);

    // Net demand is carried in units of sigma (sigma factors out of every
    // recursion) and scaled once on output.
    double cum_z = 0.0;
    double run_max = 0.0;  // running max over prefixes, seeded with S_0 = 0
    for (std::size_t k = 0; k < n; ++k) {
        cum_z += noise[k];
        const double period = static_cast<double>(k + 1);
        const double s = cum_z - policy.kappa * std::pow(period, policy.alpha);
        run_max = std::max(run_max, s);

        const double net = demand.sigma * s;
        const double lost = demand.sigma * run_max;
        out.net_demand[k] = net;
        out.lost[k] = lost;
        out.inventory_ls[k] = lost - net;
        out.backlog[k] = std::max(net, 0.0);
        out.inventory_bo[k] = std::max(-net, 0.0);
    }
    return out;
}

}  // namespace driftwalk
