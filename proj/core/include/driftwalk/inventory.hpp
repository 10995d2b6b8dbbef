#pragma once

#include <vector>

namespace driftwalk {

// Per-period demand D_n = mu + sigma * Z_n, with Z_n a standard-normal draw.
// The mean is constant across periods; it cancels out of every net-demand
// quantity, so downstream results depend only on sigma.
struct DemandModel {
    double mu = 0.0;     // per-period mean demand, >= 0
    double sigma = 1.0;  // per-period demand volatility, > 0
};

// Production plan x_n = mu + kappa*sigma*(n^alpha - (n-1)^alpha): cumulative
// supply through period n equals mu*n + kappa*sigma*n^alpha, i.e. cumulative
// mean demand plus a safety band growing like n^alpha.
struct SupplyPolicy {
    double alpha = 0.5;  // safety-band growth exponent, in [0, 1]
    double kappa = 0.0;  // signed safety multiplier
};

// Trajectories produced by one demand-noise path, all indexed 0..n-1 for
// periods 1..n.  net_demand[k] is S_{k+1}, cumulative demand minus cumulative
// supply; lost[k] is the running maximum of (0, S_1, ..., S_{k+1}), the total
// demand lost when unmet demand walks away; inventory_ls[k] = lost[k] -
// net_demand[k] is on-hand stock in that model.  backlog[k] and
// inventory_bo[k] are the positive and negative parts of net demand: the
// owed-demand queue and on-hand stock when unmet demand is backlogged.
struct PathOutcome {
    std::vector<double> net_demand;
    std::vector<double> lost;
    std::vector<double> inventory_ls;
    std::vector<double> backlog;
    std::vector<double> inventory_bo;
};

// Production quantity for period n (n >= 1).  Throws std::domain_error for
// n < 1 or invalid policy/demand parameters.
double supply_schedule(const SupplyPolicy& policy, const DemandModel& demand,
                       long n);

// Runs the inventory recursions over one noise path (one standard-normal draw
// per period).  Throws std::domain_error if the noise sequence is empty or
// contains a non-finite value, or if policy/demand parameters are invalid.
PathOutcome evolve_path(const std::vector<double>& noise,
                        const SupplyPolicy& policy, const DemandModel& demand);

}  // namespace driftwalk
