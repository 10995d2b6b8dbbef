#include "driftwalk/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mc_internal.hpp"

namespace driftwalk {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}

// Right-tail bound P[X > (1+delta)*M1] in the shape parameters.  The two
// branches meet at delta = cm2 with common value 1/(1+cm2); that point is
// special-cased so a vanishing dm2 cannot produce 0/0 there.
double right_tail_bound(double cm2, double dm2, double delta) {
    if (delta == cm2) return 1.0 / (1.0 + cm2);
    if (delta < cm2) {
        const double gap = cm2 - delta;  // positive here
        return (1.0 / (1.0 + delta)) * (dm2 + (1.0 + delta) * gap) /
               (dm2 + (1.0 + cm2) * gap);
    }
    const double direct = cm2 / (cm2 + delta * delta);
    const double gap = cm2 - delta;  // negative here
    const double damped =
        (1.0 / (1.0 + delta)) * dm2 / (dm2 + gap * gap);
    return std::min(direct, damped);
}

// Left-tail bound P[X < (1-delta)*M1], valid for delta in (0, 1).
double left_tail_bound(double cm2, double dm2, double delta) {
    const double s = cm2 + delta;
    return 1.0 - s * s * s /
                     ((dm2 + (cm2 + 1.0) * s) * (dm2 + s * s));
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

TailShape tail_shape(const MomentTriple& m) {
    require(std::isfinite(m.m1) && std::isfinite(m.m2) &&
                std::isfinite(m.m3),
            "moments must be finite");
    require(m.m1 > 0.0, "first moment must be positive");
    const double m1sq = m.m1 * m.m1;
    double cm2 = (m.m2 - m1sq) / m1sq;
    double dm2 = (m.m1 * m.m3 - m.m2 * m.m2) / (m1sq * m1sq);
    // Admissible triples give nonnegative ratios; rounding in a
    // near-degenerate empirical triple can leave a negative speck, which is
    // clamped rather than rejected.
    if (cm2 < 0.0) {
        require(cm2 >= -1e-12,
                "second moment falls below the squared mean");
        cm2 = 0.0;
    }
    if (dm2 < 0.0) {
        require(dm2 >= -1e-12,
                "moment triple fails the third-order admissibility "
                "inequality");
        dm2 = 0.0;
    }
    return {cm2, dm2};
}

TailBoundPair bp_tail_bounds(const MomentTriple& m, double delta) {
    require(std::isfinite(delta) && delta > 0.0,
            "tail offset must be positive");
    const TailShape shape = tail_shape(m);
    TailBoundPair out;
    out.upper_right = clamp01(right_tail_bound(shape.cm2, shape.dm2, delta));
    out.upper_left =
        delta < 1.0 ? clamp01(left_tail_bound(shape.cm2, shape.dm2, delta))
                    : std::numeric_limits<double>::quiet_NaN();
    return out;
}

ProbabilityBand fpt_probability_band(double x, double kappa, double sigma,
                                     double t, const MomentTriple& m) {
    require(std::isfinite(x) && x >= 0.0,
            "crossing level must be nonnegative");
    require(std::isfinite(kappa), "kappa must be finite");
    require(std::isfinite(sigma) && sigma > 0.0, "sigma must be positive");
    if (!(t > 1.0)) return {0.0, 0.0};  // the crossing clock starts at 1
    const TailShape shape = tail_shape(m);
    const double u = 0.5 * std::log(t);
    if (u > m.m1) {
        // The clock lies in the right tail: passage not happening by u is
        // bounded by the right-tail bound, so its complement floors the
        // probability.
        const double delta = u / m.m1 - 1.0;
        const double f1 = clamp01(right_tail_bound(shape.cm2, shape.dm2,
                                                   delta));
        return {clamp01(1.0 - f1), 1.0};
    }
    if (u < m.m1) {
        // The clock lies in the left tail: early passage is bounded above.
        const double delta = 1.0 - u / m.m1;  // in (0, 1) since u > 0
        const double f2 =
            clamp01(left_tail_bound(shape.cm2, shape.dm2, delta));
        return {0.0, f2};
    }
    return {0.0, 1.0};
}

McEstimate ou_passage_probability(double a, double b, double u_horizon,
                                  const SimConfig& cfg) {
    require(std::isfinite(a) && std::isfinite(b),
            "endpoints must be finite");
    require(std::isfinite(u_horizon) && u_horizon > 0.0,
            "horizon must be positive");
    require(cfg.paths >= 1, "paths must be at least 1");
    if (a >= b) return {1.0, 0.0, cfg.paths};
    require(cfg.steps >= 2, "steps must be at least 2");
    const std::vector<double> times =
        mc::ou_passage_times(a, b, u_horizon, cfg);
    std::vector<double> crossed(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        crossed[i] = std::isinf(times[i]) ? 0.0 : 1.0;
    McEstimate est = mc::reduce_paths(crossed, cfg.antithetic);
    est.paths = cfg.paths;
    return est;
}

McEstimate bm_crossing_probability(double x, double kappa, double t,
                                   const SimConfig& cfg) {
    require(std::isfinite(x) && x >= 0.0,
            "crossing level must be nonnegative");
    require(std::isfinite(kappa), "kappa must be finite");
    require(std::isfinite(t) && t > 1.0,
            "time horizon must exceed the clock start");
    require(cfg.paths >= 1, "paths must be at least 1");
    if (x + kappa <= 0.0) return {1.0, 0.0, cfg.paths};
    require(cfg.steps >= 2, "steps must be at least 2");

    const long steps = cfg.steps;
    const double ds = (t - 1.0) / static_cast<double>(steps);
    const double vol = std::sqrt(ds);
    // Moving level relative to the path start, frozen per step for the
    // bridge check.
    std::vector<double> level(static_cast<std::size_t>(steps));
    for (long i = 0; i < steps; ++i)
        level[static_cast<std::size_t>(i)] =
            x + kappa * std::sqrt(1.0 + (static_cast<double>(i) + 1.0) * ds);
    const double level0 = x + kappa;

    const long paths = cfg.paths;
    std::vector<double> crossed(static_cast<std::size_t>(paths), 0.0);

    // One step of one path; returns true when the moving level is hit.
    auto step_path = [&](double& w, long i, double dz, std::uint64_t ustream) {
        const double w_next = w + dz;
        const double c_prev =
            (i == 0 ? level0 : level[static_cast<std::size_t>(i - 1)]) - w;
        const double c_next = level[static_cast<std::size_t>(i)] - w_next;
        w = w_next;
        if (c_next <= 0.0) return true;
        const double e = 2.0 * c_prev * c_next / ds;
        if (e < 40.0) {
            const double u =
                mc::u01(mc::bits_at(ustream, static_cast<std::uint64_t>(i)));
            if (u <= std::exp(-e)) return true;
        }
        return false;
    };

    if (cfg.antithetic) {
        const long units = (paths + 1) / 2;
        mc::parallel_units(units, [&](long lo, long hi) {
            for (long k = lo; k < hi; ++k) {
                const long p0 = 2 * k;
                const long p1 = 2 * k + 1;
                const std::uint64_t zs =
                    mc::substream(cfg.seed, static_cast<std::uint64_t>(k), 0);
                const std::uint64_t us0 = mc::substream(
                    cfg.seed, static_cast<std::uint64_t>(p0), 1);
                const std::uint64_t us1 =
                    p1 < paths ? mc::substream(
                                     cfg.seed, static_cast<std::uint64_t>(p1),
                                     1)
                               : 0;
                double wa = 0.0, wb = 0.0;
                bool alive_a = true, alive_b = p1 < paths;
                for (long i = 0; i < steps && (alive_a || alive_b); ++i) {
                    const double z =
                        mc::normal_at(zs, static_cast<std::uint64_t>(i));
                    const double dz = vol * z;
                    if (alive_a && step_path(wa, i, dz, us0)) {
                        crossed[static_cast<std::size_t>(p0)] = 1.0;
                        alive_a = false;
                    }
                    if (alive_b && step_path(wb, i, -dz, us1)) {
                        crossed[static_cast<std::size_t>(p1)] = 1.0;
                        alive_b = false;
                    }
                }
            }
        });
    } else {
        mc::parallel_units(paths, [&](long lo, long hi) {
            for (long p = lo; p < hi; ++p) {
                const std::uint64_t zs =
                    mc::substream(cfg.seed, static_cast<std::uint64_t>(p), 0);
                const std::uint64_t us =
                    mc::substream(cfg.seed, static_cast<std::uint64_t>(p), 1);
                double w = 0.0;
                for (long i = 0; i < steps; ++i) {
                    const double dz =
                        vol * mc::normal_at(zs, static_cast<std::uint64_t>(i));
                    if (step_path(w, i, dz, us)) {
                        crossed[static_cast<std::size_t>(p)] = 1.0;
                        break;
                    }
                }
            }
        });
    }
    McEstimate est = mc::reduce_paths(crossed, cfg.antithetic);
    est.paths = cfg.paths;
    return est;
}

HittingReport hitting_LN_detail(double kappa, double sigma, long n_horizon,
                                long x_grid, const SimConfig& cfg) {
    require(std::isfinite(kappa), "kappa must be finite");
    require(std::isfinite(sigma) && sigma > 0.0, "sigma must be positive");
    require(n_horizon >= 2, "horizon must be at least 2");
    require(x_grid >= 2, "the level grid needs at least two nodes");
    require(cfg.paths >= 1, "paths must be at least 1");
    require(cfg.steps >= 2, "steps must be at least 2");

    const double b = kappa / std::sqrt(sigma);
    const double u_n = 0.5 * std::log(static_cast<double>(n_horizon));

    // Truncation point: march outward until no sampled path reaches the
    // level within the horizon, which collapses the intersected band's high
    // edge to zero (below any positive threshold).
    const double probe_step =
        std::max(1.0, std::sqrt(static_cast<double>(n_horizon)) / 4.0);
    SimConfig probe_cfg = cfg;
    probe_cfg.paths = std::min<long>(cfg.paths, 2000);
    const int max_probes = 64;
    double x_max = probe_step * max_probes;
    for (int k = 1; k <= max_probes; ++k) {
        const double x = probe_step * k;
        if (b <= -x) continue;  // level already crossed at the start
        probe_cfg.seed =
            cfg.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(k);
        const McEstimate p = ou_passage_probability(-x, b, u_n, probe_cfg);
        if (p.mean + 3.0 * p.std_error < 1e-6) {
            x_max = x;
            break;
        }
    }

    const long nodes = x_grid;
    const double h = x_max / static_cast<double>(nodes - 1);
    std::vector<double> mid(static_cast<std::size_t>(nodes));
    std::vector<double> half(static_cast<std::size_t>(nodes));
    std::vector<double> noise(static_cast<std::size_t>(nodes));

    for (long i = 0; i < nodes; ++i) {
        const double x = h * static_cast<double>(i);
        const double a = -x;
        double lo, hi, se;
        if (a >= b) {
            lo = hi = 1.0;  // the start is at or past the level
            se = 0.0;
        } else {
            SimConfig node_cfg = cfg;
            node_cfg.seed =
                cfg.seed ^
                (0xd6e8feb86659fd93ULL * static_cast<std::uint64_t>(i + 1));
            const OuPassageDetail mom =
                sample_ou_fpt_detail(a, b, node_cfg);
            const ProbabilityBand band = fpt_probability_band(
                x, kappa, sigma, static_cast<double>(n_horizon),
                mom.moments);
            SimConfig prob_cfg = cfg;
            prob_cfg.seed =
                cfg.seed ^
                (0xa0761d6478bd642fULL * static_cast<std::uint64_t>(i + 1));
            const McEstimate pe =
                ou_passage_probability(a, b, u_n, prob_cfg);
            lo = clamp01(std::max(band.low, pe.mean - 3.0 * pe.std_error));
            hi = clamp01(std::min(band.high, pe.mean + 3.0 * pe.std_error));
            if (lo > hi) {
                // The certified band and the sampling bracket disagree by
                // more than the bracket width; collapse to the midpoint.
                lo = hi = 0.5 * (lo + hi);
            }
            se = pe.std_error;
        }
        mid[static_cast<std::size_t>(i)] = 0.5 * (lo + hi);
        half[static_cast<std::size_t>(i)] = 0.5 * (hi - lo);
        noise[static_cast<std::size_t>(i)] = se;
    }

    auto trapezoid = [&](const std::vector<double>& f) {
        double interior = 0.0;
        for (long i = 1; i + 1 < nodes; ++i)
            interior += f[static_cast<std::size_t>(i)];
        return h * (interior + 0.5 * (f.front() + f.back()));
    };
    const double integral = trapezoid(mid);
    const double width = trapezoid(half);
    const double sampling = trapezoid(noise);

    HittingReport report;
    report.integral = integral;
    report.sigma_scaled = sigma * integral;
    report.root_sigma_scaled = std::sqrt(sigma) * integral;
    report.x_max = x_max;
    report.nodes = nodes;
    report.band_width_part = sigma * width;
    report.mc_noise_part = sigma * sampling;
    report.estimate.mean = report.sigma_scaled;
    report.estimate.std_error = report.band_width_part + report.mc_noise_part;
    report.estimate.paths = cfg.paths;
    return report;
}

McEstimate hitting_LN_estimate(double kappa, double sigma, long n_horizon,
                               long x_grid, const SimConfig& cfg) {
    return hitting_LN_detail(kappa, sigma, n_horizon, x_grid, cfg).estimate;
}

}  // namespace driftwalk
