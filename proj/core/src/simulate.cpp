#include "driftwalk/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "driftwalk/normal.hpp"
#include "mc_internal.hpp"

namespace driftwalk {

namespace {

constexpr double kAbsorptionCapU = 20.0;  // horizon cap for first-passage runs

void require(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}

void check_policy(const SupplyPolicy& policy, const DemandModel& demand) {
    require(std::isfinite(demand.sigma) && demand.sigma > 0.0,
            "demand sigma must be positive and finite");
    require(std::isfinite(demand.mu) && demand.mu >= 0.0,
            "demand mu must be nonnegative and finite");
    require(std::isfinite(policy.alpha) && policy.alpha >= 0.0 &&
                policy.alpha <= 1.0,
            "policy alpha must lie in [0, 1]");
    require(std::isfinite(policy.kappa), "policy kappa must be finite");
}

// Compensated accumulator for one pass over values in a fixed order.
struct Acc {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    double total() const { return sum + comp; }
};

// Per-path running maxima of the drifted walk sum(Z) - drift[n], n = 1..N,
// seeded with the period-0 value 0, scaled per path by `scale`.  One normal
// stream drives a mirrored pair when antithetic.
std::vector<double> walk_max_values(const std::vector<double>& drift,
                                    double scale, const SimConfig& cfg) {
    const long paths = cfg.paths;
    const long n_steps = static_cast<long>(drift.size());
    std::vector<double> values(static_cast<std::size_t>(paths), 0.0);
    if (cfg.antithetic) {
        const long units = (paths + 1) / 2;
        mc::parallel_units(units, [&](long lo, long hi) {
            for (long k = lo; k < hi; ++k) {
                const std::uint64_t zs =
                    mc::substream(cfg.seed, static_cast<std::uint64_t>(k), 0);
                double cum_a = 0.0, cum_b = 0.0, max_a = 0.0, max_b = 0.0;
                for (long n = 0; n < n_steps; ++n) {
                    const double z =
                        mc::normal_at(zs, static_cast<std::uint64_t>(n));
                    const double d = drift[static_cast<std::size_t>(n)];
                    cum_a += z;
                    cum_b -= z;
                    const double sa = cum_a - d;
                    if (sa > max_a) max_a = sa;
                    const double sb = cum_b - d;
                    if (sb > max_b) max_b = sb;
                }
                values[static_cast<std::size_t>(2 * k)] = scale * max_a;
                if (2 * k + 1 < paths)
                    values[static_cast<std::size_t>(2 * k + 1)] =
                        scale * max_b;
            }
        });
    } else {
        mc::parallel_units(paths, [&](long lo, long hi) {
            for (long p = lo; p < hi; ++p) {
                const std::uint64_t zs =
                    mc::substream(cfg.seed, static_cast<std::uint64_t>(p), 0);
                double cum = 0.0, run_max = 0.0;
                for (long n = 0; n < n_steps; ++n) {
                    cum += mc::normal_at(zs, static_cast<std::uint64_t>(n));
                    const double s =
                        cum - drift[static_cast<std::size_t>(n)];
                    if (s > run_max) run_max = s;
                }
                values[static_cast<std::size_t>(p)] = scale * run_max;
            }
        });
    }
    return values;
}

}  // namespace

namespace mc {

McEstimate reduce_paths(const std::vector<double>& path_values,
                        bool antithetic) {
    const long paths = static_cast<long>(path_values.size());
    McEstimate est;
    est.paths = paths;
    if (paths == 0) return est;
    est.mean = neumaier_total(path_values) / static_cast<double>(paths);

    // Independent units: mirrored-pair averages under antithetic pairing,
    // single paths otherwise (an unpaired trailing path stands alone).
    const long units = antithetic ? (paths + 1) / 2 : paths;
    if (units < 2) {
        est.std_error = 0.0;
        return est;
    }
    auto unit_value = [&](long j) {
        if (!antithetic) return path_values[static_cast<std::size_t>(j)];
        const std::size_t a = static_cast<std::size_t>(2 * j);
        const std::size_t b = a + 1;
        if (b < path_values.size())
            return 0.5 * (path_values[a] + path_values[b]);
        return path_values[a];
    };
    Acc mean_acc;
    for (long j = 0; j < units; ++j) mean_acc.add(unit_value(j));
    const double unit_mean = mean_acc.total() / static_cast<double>(units);
    Acc ss;
    for (long j = 0; j < units; ++j) {
        const double d = unit_value(j) - unit_mean;
        ss.add(d * d);
    }
    const double var = ss.total() / static_cast<double>(units - 1);
    est.std_error = std::sqrt(var / static_cast<double>(units));
    return est;
}

std::vector<double> ou_passage_times(double a, double b, double u_cap,
                                     const SimConfig& cfg) {
    const long paths = cfg.paths;
    const long steps = cfg.steps;
    const double dt = u_cap / static_cast<double>(steps);
    const double decay = 1.0 - dt;
    const double vol = std::sqrt(2.0 * dt);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> times(static_cast<std::size_t>(paths), inf);
    if (a >= b) {
        for (auto& t : times) t = 0.0;
        return times;
    }

    // One Euler step with an endpoint test plus a Brownian-bridge crossing
    // draw inside the step.  Returns the absorption time or +infinity, and
    // advances y.  w >= 40 makes the bridge probability < 5e-18, below one
    // draw in any realistic budget, so the uniform is not consumed.
    auto step_path = [&](double& y, double z, std::uint64_t ustream,
                         std::uint64_t i) {
        const double y_next = y * decay + vol * z;
        if (y_next >= b) return (static_cast<double>(i) + 1.0) * dt;
        const double w = (b - y) * (b - y_next) / dt;
        y = y_next;
        if (w < 40.0) {
            const double u = u01(bits_at(ustream, i));
            if (u <= std::exp(-w)) return (static_cast<double>(i) + 1.0) * dt;
        }
        return inf;
    };

    if (cfg.antithetic) {
        const long units = (paths + 1) / 2;
        parallel_units(units, [&](long lo, long hi) {
            for (long k = lo; k < hi; ++k) {
                const long p0 = 2 * k;
                const long p1 = 2 * k + 1;
                const std::uint64_t zs =
                    substream(cfg.seed, static_cast<std::uint64_t>(k), 0);
                const std::uint64_t us0 =
                    substream(cfg.seed, static_cast<std::uint64_t>(p0), 1);
                const std::uint64_t us1 =
                    p1 < paths
                        ? substream(cfg.seed, static_cast<std::uint64_t>(p1), 1)
                        : 0;
                double ya = a, yb = a;
                bool alive_a = true, alive_b = p1 < paths;
                for (long i = 0; i < steps && (alive_a || alive_b); ++i) {
                    const double z =
                        normal_at(zs, static_cast<std::uint64_t>(i));
                    if (alive_a) {
                        const double t = step_path(
                            ya, z, us0, static_cast<std::uint64_t>(i));
                        if (t < inf) {
                            times[static_cast<std::size_t>(p0)] = t;
                            alive_a = false;
                        }
                    }
                    if (alive_b) {
                        const double t = step_path(
                            yb, -z, us1, static_cast<std::uint64_t>(i));
                        if (t < inf) {
                            times[static_cast<std::size_t>(p1)] = t;
                            alive_b = false;
                        }
                    }
                }
            }
        });
    } else {
        parallel_units(paths, [&](long lo, long hi) {
            for (long p = lo; p < hi; ++p) {
                const std::uint64_t zs =
                    substream(cfg.seed, static_cast<std::uint64_t>(p), 0);
                const std::uint64_t us =
                    substream(cfg.seed, static_cast<std::uint64_t>(p), 1);
                double y = a;
                for (long i = 0; i < steps; ++i) {
                    const double z =
                        normal_at(zs, static_cast<std::uint64_t>(i));
                    const double t =
                        step_path(y, z, us, static_cast<std::uint64_t>(i));
                    if (t < inf) {
                        times[static_cast<std::size_t>(p)] = t;
                        break;
                    }
                }
            }
        });
    }
    return times;
}

}  // namespace mc

McEstimate sample_LN(const SupplyPolicy& policy, const DemandModel& demand,
                     long n_horizon, const SimConfig& cfg) {
    check_policy(policy, demand);
    require(n_horizon >= 1, "horizon must be at least 1");
    require(cfg.paths >= 1, "paths must be at least 1");
    // The peak shortfall sigma * max(sum Z - kappa n^alpha) does not involve
    // mu: level demand is matched one-for-one by the level supply term.
    std::vector<double> drift(static_cast<std::size_t>(n_horizon));
    for (long n = 1; n <= n_horizon; ++n)
        drift[static_cast<std::size_t>(n - 1)] =
            policy.kappa * std::pow(static_cast<double>(n), policy.alpha);
    const std::vector<double> values =
        walk_max_values(drift, demand.sigma, cfg);
    McEstimate est = mc::reduce_paths(values, cfg.antithetic);
    est.paths = cfg.paths;
    return est;
}

McEstimate sample_rho(double kappa, const SimConfig& cfg) {
    require(std::isfinite(kappa), "kappa must be finite");
    require(cfg.paths >= 1, "paths must be at least 1");
    require(cfg.steps >= 100,
            "steps must be at least 100 for the pre-limit maximum");
    const long n = cfg.steps;
    std::vector<double> drift(static_cast<std::size_t>(n));
    for (long j = 1; j <= n; ++j)
        drift[static_cast<std::size_t>(j - 1)] =
            kappa * std::sqrt(static_cast<double>(j));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const std::vector<double> values = walk_max_values(drift, scale, cfg);
    McEstimate est = mc::reduce_paths(values, cfg.antithetic);
    est.paths = cfg.paths;
    return est;
}

double rho_derivative(double kappa, const SimConfig& cfg) {
    constexpr double h = 0.05;
    const double up = sample_rho(kappa + h, cfg).mean;
    const double down = sample_rho(kappa - h, cfg).mean;
    return (up - down) / (2.0 * h);
}

std::vector<double> sample_ou_passage_times(double a, double b,
                                            const SimConfig& cfg) {
    require(std::isfinite(a) && std::isfinite(b),
            "endpoints must be finite");
    require(a <= b, "start level must not exceed the target level");
    require(cfg.paths >= 1, "paths must be at least 1");
    if (a == b)
        return std::vector<double>(static_cast<std::size_t>(cfg.paths), 0.0);
    require(cfg.steps >= 2, "steps must be at least 2");
    std::vector<double> times =
        mc::ou_passage_times(a, b, kAbsorptionCapU, cfg);
    for (double& t : times) {
        if (!(t < kAbsorptionCapU)) t = kAbsorptionCapU;
    }
    return times;
}

OuPassageDetail sample_ou_fpt_detail(double a, double b,
                                     const SimConfig& cfg) {
    require(std::isfinite(a) && std::isfinite(b),
            "endpoints must be finite");
    require(a <= b, "start level must not exceed the target level");
    require(cfg.paths >= 1, "paths must be at least 1");
    OuPassageDetail detail;
    detail.paths = cfg.paths;
    detail.cap_u = kAbsorptionCapU;
    if (a == b) return detail;  // passage is immediate: all moments vanish
    require(cfg.steps >= 2, "steps must be at least 2");

    const std::vector<double> times =
        mc::ou_passage_times(a, b, kAbsorptionCapU, cfg);
    Acc s1, s2, s3;
    long unabsorbed = 0;
    for (double t : times) {
        if (!(t < kAbsorptionCapU)) {
            t = kAbsorptionCapU;
            ++unabsorbed;
        }
        s1.add(t);
        s2.add(t * t);
        s3.add(t * t * t);
    }
    const double n = static_cast<double>(cfg.paths);
    detail.moments.m1 = s1.total() / n;
    detail.moments.m2 = s2.total() / n;
    detail.moments.m3 = s3.total() / n;
    detail.unabsorbed = unabsorbed;
    return detail;
}

MomentTriple sample_ou_fpt_moments(double a, double b, const SimConfig& cfg) {
    const OuPassageDetail detail = sample_ou_fpt_detail(a, b, cfg);
    if (detail.unabsorbed > 0) {
        std::fprintf(stderr,
                     "warning: %ld of %ld passage paths were still alive at "
                     "the horizon cap u = %g and were assigned the cap time\n",
                     detail.unabsorbed, detail.paths, detail.cap_u);
    }
    return detail.moments;
}

}  // namespace driftwalk
