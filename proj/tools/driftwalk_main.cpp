// Command-line front end: composes the library modules into reproducible
// experiments and emits machine-readable run records.
//
// Output contract: one JSON document per run on stdout with top-level keys
// {command, params, result, seed, version, wall_time}; optional CSV rows via
// --out (columns listed in each subcommand's --out help text); diagnostics on
// stderr.  Floating-point values are serialized with 17 significant digits,
// so every emitted number round-trips to the exact binary double and a rerun
// with the recorded (command, params, seed) reproduces the result payload
// bit for bit.  Exit codes: 0 success, 2 usage error, 3 domain error,
// 4 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "driftwalk/asymptotics.hpp"
#include "driftwalk/errors.hpp"
#include "driftwalk/hitting.hpp"
#include "driftwalk/inventory.hpp"
#include "driftwalk/normal.hpp"
#include "driftwalk/optimizer.hpp"
#include "driftwalk/simulate.hpp"
#include "driftwalk/version.hpp"

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

// Problems with the invocation itself (unreadable config, unwritable CSV):
// exit code 2, like any other usage error.
class usage_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Raised after a selfcheck run that found failures, once the record is out.
class selfcheck_failure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// JSON emission with fixed float formatting.

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";  // JSON has no non-finite numbers
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void append_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (const char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x",
                                  static_cast<unsigned>(ch));
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += '"';
}

void emit_json(const ojson& j, std::string& out) {
    if (j.is_null()) {
        out += "null";
    } else if (j.is_boolean()) {
        out += j.get<bool>() ? "true" : "false";
    } else if (j.is_number_float()) {
        out += format_double(j.get<double>());
    } else if (j.is_number_unsigned()) {
        out += std::to_string(j.get<std::uint64_t>());
    } else if (j.is_number_integer()) {
        out += std::to_string(j.get<std::int64_t>());
    } else if (j.is_string()) {
        append_escaped(out, j.get<std::string>());
    } else if (j.is_array()) {
        out += '[';
        bool first = true;
        for (const auto& item : j) {
            if (!first) out += ',';
            first = false;
            emit_json(item, out);
        }
        out += ']';
    } else {  // object
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            append_escaped(out, it.key());
            out += ':';
            emit_json(it.value(), out);
        }
        out += '}';
    }
}

// ---------------------------------------------------------------------------
// Flag plumbing: every value flag is registered once and serves three roles —
// CLI option, config-file key (flag name with dashes as underscores), and
// params echo in the run record.

struct Binding {
    std::string key;
    CLI::Option* opt = nullptr;
    std::function<void(const json&)> load;  // assign from a config value
    std::function<ojson()> echo;            // current effective value
};

std::string key_of(const std::string& long_flag) {
    std::string key = long_flag.substr(long_flag.find_first_not_of('-'));
    for (char& ch : key)
        if (ch == '-') ch = '_';
    return key;
}

// Per-subcommand state shared by registration and the run callback.
struct CommandIo {
    CLI::App* cmd = nullptr;
    std::string config_path;
    std::string out_path;
    std::vector<Binding> bindings;

    template <typename T>
    CLI::Option* bind(const std::string& flag, T& var,
                      const std::string& desc) {
        CLI::Option* opt = cmd->add_option(flag, var, desc)
                               ->capture_default_str();
        bindings.push_back(Binding{
            key_of(flag), opt, [&var](const json& v) { var = v.get<T>(); },
            [&var]() { return ojson(var); }});
        return opt;
    }

    CLI::Option* bind_flag(const std::string& flag, bool& var,
                           const std::string& desc) {
        CLI::Option* opt = cmd->add_flag(flag, var, desc);
        bindings.push_back(Binding{
            key_of(flag), opt, [&var](const json& v) { var = v.get<bool>(); },
            [&var]() { return ojson(var); }});
        return opt;
    }

    // Values from --config fill in every flag not given on the command line.
    void merge_config() const {
        if (config_path.empty()) return;
        std::ifstream in(config_path);
        if (!in) throw usage_error("cannot open config file: " + config_path);
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw usage_error("config file " + config_path + ": " + e.what());
        }
        if (!doc.is_object())
            throw usage_error("config file " + config_path +
                              ": top level must be a JSON object");
        for (const Binding& b : bindings) {
            if (b.opt->count() > 0 || !doc.contains(b.key)) continue;
            try {
                b.load(doc.at(b.key));
            } catch (const json::exception& e) {
                throw usage_error("config key '" + b.key + "': " + e.what());
            }
        }
    }

    ojson params() const {
        ojson p = ojson::object();
        for (const Binding& b : bindings) p[b.key] = b.echo();
        return p;
    }
};

// Registers --config/--out on a subcommand and returns its shared state.
std::shared_ptr<CommandIo> make_io(CLI::App* cmd,
                                   const std::string& csv_columns) {
    auto io = std::make_shared<CommandIo>();
    io->cmd = cmd;
    // Cost flags include --h, so help is reachable as --help only.
    cmd->set_help_flag("--help", "print this help message and exit");
    cmd->add_option("--config", io->config_path,
                    "JSON file whose keys mirror the flags (dashes become "
                    "underscores); explicit flags override it");
    cmd->add_option("--out", io->out_path,
                    "write CSV rows with columns: " + csv_columns);
    return io;
}

// ---------------------------------------------------------------------------
// CSV output.

using CsvRow = std::vector<std::string>;

void write_csv(const std::string& path, const std::string& header,
               const std::vector<CsvRow>& rows) {
    std::ofstream out(path);
    if (!out) throw usage_error("cannot open output file: " + path);
    out << header << '\n';
    for (const CsvRow& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    if (!out) throw usage_error("failed writing output file: " + path);
}

std::string csv_num(double v) { return format_double(v); }
std::string csv_num(long v) { return std::to_string(v); }
std::string csv_num(std::uint64_t v) { return std::to_string(v); }

// ---------------------------------------------------------------------------
// Record assembly: CSV first (still before any stdout), then the JSON
// document.  Nothing is printed when computation throws, so a failed run
// leaves stdout empty.

void finish(const std::string& command, const CommandIo& io,
            std::uint64_t seed, const ojson& result, double wall_seconds,
            const std::string& csv_header, const std::vector<CsvRow>& rows) {
    if (!io.out_path.empty()) write_csv(io.out_path, csv_header, rows);
    ojson record = ojson::object();
    record["command"] = command;
    record["params"] = io.params();
    record["result"] = result;
    record["seed"] = seed;
    record["version"] = driftwalk::version;
    record["wall_time"] = wall_seconds;
    std::string text;
    emit_json(record, text);
    text += '\n';
    std::fputs(text.c_str(), stdout);
}

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_ =
        std::chrono::steady_clock::now();
};

ojson estimate_json(const driftwalk::McEstimate& e) {
    ojson r = ojson::object();
    r["mean"] = e.mean;
    r["std_error"] = e.std_error;
    r["paths"] = e.paths;
    return r;
}

// ---------------------------------------------------------------------------
// Subcommands.

void register_bounds(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand(
        "bounds",
        "Closed-form lower/upper envelope for the expected running maximum "
        "E[L_N] of the drift-band walk");
    auto io = make_io(
        cmd, "alpha,kappa,sigma,n,lower,upper,regime,growth_order");
    auto alpha = std::make_shared<double>(0.5);
    auto kappa = std::make_shared<double>(0.0);
    auto sigma = std::make_shared<double>(1.0);
    auto n = std::make_shared<long>(100);
    auto seed = std::make_shared<std::uint64_t>(0);
    io->bind("--alpha", *alpha, "band growth exponent in [0, 1]");
    io->bind("--kappa", *kappa, "signed band coefficient");
    io->bind("--sigma", *sigma, "per-period volatility, > 0");
    io->bind("--n", *n, "horizon length, >= 1");
    io->bind("--seed", *seed, "echoed in the record (no sampling here)");
    cmd->callback([io, alpha, kappa, sigma, n, seed]() {
        io->merge_config();
        Stopwatch watch;
        const driftwalk::BoundEstimate b =
            driftwalk::bound_envelope(*alpha, *kappa, *sigma, *n);
        ojson result = ojson::object();
        result["lower"] = b.lower;
        result["upper"] = b.upper;
        result["regime"] = driftwalk::to_string(b.regime);
        result["growth_order"] = driftwalk::to_string(b.growth_order);
        const std::vector<CsvRow> rows{{csv_num(*alpha), csv_num(*kappa),
                                        csv_num(*sigma), csv_num(*n),
                                        csv_num(b.lower), csv_num(b.upper),
                                        driftwalk::to_string(b.regime),
                                        driftwalk::to_string(b.growth_order)}};
        finish("bounds", *io, *seed, result, watch.seconds(),
               "alpha,kappa,sigma,n,lower,upper,regime,growth_order", rows);
    });
}

void register_spitzer(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand(
        "spitzer",
        "E[L_N] for the linear-drift walk: exact Spitzer partial sum and/or "
        "its closed-form integral counterpart");
    auto io = make_io(cmd, "kappa,sigma,n,form,value");
    auto kappa = std::make_shared<double>(1.0);
    auto sigma = std::make_shared<double>(1.0);
    auto n = std::make_shared<long>(100);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto want_exact = std::make_shared<bool>(false);
    auto want_closed = std::make_shared<bool>(false);
    io->bind("--kappa", *kappa, "signed band coefficient");
    io->bind("--sigma", *sigma, "per-period volatility, > 0");
    io->bind("--n", *n, "horizon length, >= 1");
    io->bind("--seed", *seed, "echoed in the record (no sampling here)");
    io->bind_flag("--exact", *want_exact, "compute the exact partial sum");
    io->bind_flag("--closed", *want_closed,
                  "compute the closed integral form (kappa != 0)");
    cmd->callback([io, kappa, sigma, n, seed, want_exact, want_closed]() {
        io->merge_config();
        // Default with neither flag: compute both.
        const bool do_exact = *want_exact || !*want_closed;
        const bool do_closed = *want_closed || !*want_exact;
        Stopwatch watch;
        ojson result = ojson::object();
        std::vector<CsvRow> rows;
        if (do_exact) {
            const double v = driftwalk::spitzer_exact(*kappa, *sigma, *n);
            result["exact"] = v;
            rows.push_back({csv_num(*kappa), csv_num(*sigma), csv_num(*n),
                            "exact", csv_num(v)});
        }
        if (do_closed) {
            const double v = driftwalk::spitzer_closed(*kappa, *sigma, *n);
            result["closed"] = v;
            rows.push_back({csv_num(*kappa), csv_num(*sigma), csv_num(*n),
                            "closed", csv_num(v)});
        }
        finish("spitzer", *io, *seed, result, watch.seconds(),
               "kappa,sigma,n,form,value", rows);
    });
}

void register_simulate(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand(
        "simulate",
        "Monte Carlo estimate of E[L_N] under the power-band replenishment "
        "policy (antithetic pairs, deterministic for a fixed seed)");
    auto io =
        make_io(cmd, "alpha,kappa,mu,sigma,n,paths,seed,mean,std_error");
    auto alpha = std::make_shared<double>(0.5);
    auto kappa = std::make_shared<double>(0.0);
    auto mu = std::make_shared<double>(0.0);
    auto sigma = std::make_shared<double>(1.0);
    auto n = std::make_shared<long>(100);
    auto paths = std::make_shared<long>(10000);
    auto seed = std::make_shared<std::uint64_t>(0);
    io->bind("--alpha", *alpha, "band growth exponent in [0, 1]");
    io->bind("--kappa", *kappa, "signed band coefficient");
    io->bind("--mu", *mu,
             "mean per-period demand, >= 0 (cancels out of L_N)");
    io->bind("--sigma", *sigma, "per-period volatility, > 0");
    io->bind("--n", *n, "horizon length, >= 1");
    io->bind("--paths", *paths, "number of simulated trajectories");
    io->bind("--seed", *seed, "RNG stream seed");
    cmd->callback([io, alpha, kappa, mu, sigma, n, paths, seed]() {
        io->merge_config();
        driftwalk::SimConfig cfg;
        cfg.paths = *paths;
        cfg.seed = *seed;
        Stopwatch watch;
        const driftwalk::McEstimate est =
            driftwalk::sample_LN(driftwalk::SupplyPolicy{*alpha, *kappa},
                                 driftwalk::DemandModel{*mu, *sigma}, *n, cfg);
        const std::vector<CsvRow> rows{
            {csv_num(*alpha), csv_num(*kappa), csv_num(*mu), csv_num(*sigma),
             csv_num(*n), csv_num(*paths), csv_num(*seed), csv_num(est.mean),
             csv_num(est.std_error)}};
        finish("simulate", *io, *seed, estimate_json(est), watch.seconds(),
               "alpha,kappa,mu,sigma,n,paths,seed,mean,std_error", rows);
    });
}

void register_rho(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand(
        "rho",
        "Monte Carlo estimate of the Brownian band constant rho(kappa) = "
        "E[sup over t <= 1 of (B_t - kappa*sqrt(t))]");
    auto io = make_io(
        cmd, "kappa,steps,paths,seed,mean,std_error,derivative");
    auto kappa = std::make_shared<double>(0.0);
    auto steps = std::make_shared<long>(1000);
    auto paths = std::make_shared<long>(10000);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto want_deriv = std::make_shared<bool>(false);
    io->bind("--kappa", *kappa, "band coefficient");
    io->bind("--steps", *steps, "walk length of the pre-limit, >= 100");
    io->bind("--paths", *paths, "number of simulated trajectories");
    io->bind("--seed", *seed, "RNG stream seed");
    io->bind_flag("--derivative", *want_deriv,
                  "also report the common-random-number central difference "
                  "d rho / d kappa (step 0.05)");
    cmd->callback([io, kappa, steps, paths, seed, want_deriv]() {
        io->merge_config();
        driftwalk::SimConfig cfg;
        cfg.paths = *paths;
        cfg.seed = *seed;
        cfg.steps = *steps;
        Stopwatch watch;
        const driftwalk::McEstimate est = driftwalk::sample_rho(*kappa, cfg);
        ojson result = estimate_json(est);
        std::string deriv_cell;
        if (*want_deriv) {
            const double d = driftwalk::rho_derivative(*kappa, cfg);
            result["derivative"] = d;
            deriv_cell = csv_num(d);
        }
        const std::vector<CsvRow> rows{
            {csv_num(*kappa), csv_num(*steps), csv_num(*paths),
             csv_num(*seed), csv_num(est.mean), csv_num(est.std_error),
             deriv_cell}};
        finish("rho", *io, *seed, result, watch.seconds(),
               "kappa,steps,paths,seed,mean,std_error,derivative", rows);
    });
}

void register_hitting(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand(
        "hitting",
        "E[L_N] at the square-root band via the level-crossing integral: "
        "per-level crossing probabilities are bracketed by three-moment tail "
        "bounds intersected with Monte Carlo confidence intervals");
    auto io = make_io(cmd,
                      "kappa,sigma,n,x_grid,paths,steps,seed,mean,std_error,"
                      "integral,x_max,nodes,band_width_part,mc_noise_part");
    auto kappa = std::make_shared<double>(1.0);
    auto sigma = std::make_shared<double>(1.0);
    auto n = std::make_shared<long>(100);
    auto x_grid = std::make_shared<long>(32);
    auto paths = std::make_shared<long>(2000);
    auto steps = std::make_shared<long>(500);
    auto seed = std::make_shared<std::uint64_t>(0);
    io->bind("--kappa", *kappa, "band coefficient");
    io->bind("--sigma", *sigma, "per-period volatility, > 0");
    io->bind("--n", *n, "horizon length, >= 2");
    io->bind("--x-grid", *x_grid, "level-integral trapezoid nodes, >= 2");
    io->bind("--paths", *paths, "paths per crossing-probability estimate");
    io->bind("--steps", *steps, "Euler steps per diffusion path");
    io->bind("--seed", *seed, "RNG stream seed");
    cmd->callback([io, kappa, sigma, n, x_grid, paths, steps, seed]() {
        io->merge_config();
        driftwalk::SimConfig cfg;
        cfg.paths = *paths;
        cfg.seed = *seed;
        cfg.steps = *steps;
        Stopwatch watch;
        const driftwalk::HittingReport rep =
            driftwalk::hitting_LN_detail(*kappa, *sigma, *n, *x_grid, cfg);
        ojson result = estimate_json(rep.estimate);
        result["integral"] = rep.integral;
        result["root_sigma_scaled"] = rep.root_sigma_scaled;
        result["x_max"] = rep.x_max;
        result["nodes"] = rep.nodes;
        result["band_width_part"] = rep.band_width_part;
        result["mc_noise_part"] = rep.mc_noise_part;
        const std::vector<CsvRow> rows{
            {csv_num(*kappa), csv_num(*sigma), csv_num(*n), csv_num(*x_grid),
             csv_num(*paths), csv_num(*steps), csv_num(*seed),
             csv_num(rep.estimate.mean), csv_num(rep.estimate.std_error),
             csv_num(rep.integral), csv_num(rep.x_max), csv_num(rep.nodes),
             csv_num(rep.band_width_part), csv_num(rep.mc_noise_part)}};
        finish("hitting", *io, *seed, result, watch.seconds(),
               "kappa,sigma,n,x_grid,paths,steps,seed,mean,std_error,"
               "integral,x_max,nodes,band_width_part,mc_noise_part",
               rows);
    });
}

ojson solution_json(const driftwalk::Solution& s) {
    ojson r = ojson::object();
    r["kappa"] = s.kappa;
    r["objective"] = s.objective;
    r["method"] = driftwalk::to_string(s.method);
    r["alpha"] = s.alpha;
    return r;
}

void register_optimize(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand(
        "optimize",
        "Optimize the band coefficient: closed-form surrogate solutions "
        "(with the two-sided ratio certificate), the simulated Brownian "
        "limit, or the backorder closed form");
    auto io = make_io(cmd,
                      "c,p,h,b,h_prime,sigma,n,seed,method,kappa,objective,"
                      "v_lower,v_upper,ratio (costs as solved, i.e. after "
                      "any --fold-holding; ratio columns empty when the "
                      "surrogate certificate is undefined)");
    auto c = std::make_shared<double>(1.0);
    auto p = std::make_shared<double>(2.0);
    auto h = std::make_shared<double>(0.0);
    auto b = std::make_shared<double>(2.0);
    auto h_prime = std::make_shared<double>(0.0);
    auto sigma = std::make_shared<double>(1.0);
    auto n = std::make_shared<long>(100);
    auto method = std::make_shared<std::string>("lower");
    auto fold = std::make_shared<bool>(false);
    auto paths = std::make_shared<long>(2000);
    auto steps = std::make_shared<long>(400);
    auto seed = std::make_shared<std::uint64_t>(0);
    io->bind("--c", *c, "unit production cost");
    io->bind("--p", *p, "unit lost-sales penalty");
    io->bind("--h", *h, "unit holding cost (lost-sales model)");
    io->bind("--b", *b, "unit backlog penalty (backorder method)");
    io->bind("--h-prime", *h_prime, "unit holding cost (backorder method)");
    io->bind("--sigma", *sigma, "per-period volatility, > 0");
    io->bind("--n", *n, "horizon length, >= 1");
    io->bind("--method", *method,
             "one of: lower, upper, upper-unconstrained, brownian, backorder")
        ->check(CLI::IsMember({"lower", "upper", "upper-unconstrained",
                               "brownian", "backorder"}));
    io->bind_flag("--fold-holding", *fold,
                  "absorb the holding cost first (c+h, p+h, h=0); any "
                  "model-specific weighting of h is the caller's business");
    io->bind("--paths", *paths, "trajectories per estimate (brownian)");
    io->bind("--steps", *steps, "walk length per estimate (brownian)");
    io->bind("--seed", *seed, "RNG stream seed (brownian)");
    cmd->callback(
        [io, c, p, h, b, h_prime, sigma, n, method, fold, paths, seed,
         steps]() {
            io->merge_config();
            driftwalk::CostParams costs{*c, *p, *h, *b, *h_prime};
            if (*fold) costs = driftwalk::apply_holding(costs);
            Stopwatch watch;
            driftwalk::Solution sol;
            ojson result = ojson::object();
            if (*method == "lower") {
                sol = driftwalk::solve_lower(costs, *sigma, *n);
            } else if (*method == "upper") {
                sol = driftwalk::solve_upper(costs, *sigma, *n, true);
            } else if (*method == "upper-unconstrained") {
                sol = driftwalk::solve_upper(costs, *sigma, *n, false);
            } else if (*method == "brownian") {
                driftwalk::SimConfig cfg;
                cfg.paths = *paths;
                cfg.seed = *seed;
                cfg.steps = *steps;
                const driftwalk::BrownianDetail detail =
                    driftwalk::brownian_optimize_detail(costs, *sigma, *n,
                                                        cfg);
                sol = detail.solution;
                result = solution_json(sol);
                result["rho_mean"] = detail.rho_mean;
                result["rho_std_error"] = detail.rho_std_error;
                result["objective_std_error"] = detail.objective_std_error;
            } else {
                sol = driftwalk::backorder_solve(costs, *sigma, *n);
            }
            if (result.empty()) result = solution_json(sol);
            // The surrogate certificate rides along whenever it is defined
            // for these costs (lost-sales methods with 0 < c < p).
            std::string rl, ru, rr;
            if (*method != "backorder" && costs.c > 0.0 &&
                costs.c < costs.p) {
                const driftwalk::RatioReport report =
                    driftwalk::ratio_report(costs, *sigma, *n);
                ojson rj = ojson::object();
                rj["v_lower"] = report.v_lower;
                rj["v_upper"] = report.v_upper;
                rj["ratio"] = report.ratio;
                rj["ratio_lower_cert"] = report.ratio_lower_cert;
                rj["ratio_upper_cert"] = report.ratio_upper_cert;
                result["ratio_report"] = rj;
                rl = csv_num(report.v_lower);
                ru = csv_num(report.v_upper);
                rr = csv_num(report.ratio);
            }
            const std::vector<CsvRow> rows{
                {csv_num(costs.c), csv_num(costs.p), csv_num(costs.h),
                 csv_num(costs.b), csv_num(costs.h_prime), csv_num(*sigma),
                 csv_num(*n), csv_num(*seed), *method, csv_num(sol.kappa),
                 csv_num(sol.objective), rl, ru, rr}};
            finish("optimize", *io, *seed, result, watch.seconds(),
                   "c,p,h,b,h_prime,sigma,n,seed,method,kappa,objective,"
                   "v_lower,v_upper,ratio",
                   rows);
        });
}

void register_equivalence(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand(
        "equivalence",
        "Lost-sales over backorder objective ratio at matched penalties "
        "(b = p, h' = h) along an ascending penalty ladder");
    auto io = make_io(cmd, "c,h,sigma,n,p,ratio");
    auto c = std::make_shared<double>(1.0);
    auto h = std::make_shared<double>(0.0);
    auto p_list = std::make_shared<std::vector<double>>(
        std::vector<double>{10.0, 100.0, 1000.0});
    auto sigma = std::make_shared<double>(1.0);
    auto n = std::make_shared<long>(100);
    auto seed = std::make_shared<std::uint64_t>(0);
    io->bind("--c", *c, "unit production cost");
    io->bind("--h", *h, "unit holding cost shared by both models");
    io->bind("--p-list", *p_list,
             "ascending penalties, each > c and with p+h > 2(c+h)")
        ->delimiter(',');
    io->bind("--sigma", *sigma, "per-period volatility, > 0");
    io->bind("--n", *n, "horizon length, >= 1");
    io->bind("--seed", *seed, "echoed in the record (no sampling here)");
    cmd->callback([io, c, h, p_list, sigma, n, seed]() {
        io->merge_config();
        Stopwatch watch;
        const std::vector<driftwalk::EquivalencePoint> curve =
            driftwalk::equivalence_curve(*c, *h, *p_list, *sigma, *n);
        ojson points = ojson::array();
        std::vector<CsvRow> rows;
        for (const driftwalk::EquivalencePoint& pt : curve) {
            ojson entry = ojson::object();
            entry["p"] = pt.p;
            entry["ratio"] = pt.ratio;
            points.push_back(entry);
            rows.push_back({csv_num(*c), csv_num(*h), csv_num(*sigma),
                            csv_num(*n), csv_num(pt.p), csv_num(pt.ratio)});
        }
        ojson result = ojson::object();
        result["curve"] = points;
        finish("equivalence", *io, *seed, result, watch.seconds(),
               "c,h,sigma,n,p,ratio", rows);
    });
}

// ---------------------------------------------------------------------------
// selfcheck: a compact invariant battery over the assembled library.

struct CheckOutcome {
    std::string name;
    bool pass = false;
    std::string detail;
};

void run_check(std::vector<CheckOutcome>& out, const std::string& name,
               const std::function<std::pair<bool, std::string>()>& body) {
    CheckOutcome o;
    o.name = name;
    try {
        const auto [pass, detail] = body();
        o.pass = pass;
        o.detail = detail;
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(o));
}

class ThreadCountOverride {
  public:
    explicit ThreadCountOverride(const char* value) {
        const char* prev = std::getenv("DRIFTWALK_THREADS");
        had_ = prev != nullptr;
        if (had_) saved_ = prev;
        setenv("DRIFTWALK_THREADS", value, 1);
    }
    ~ThreadCountOverride() {
        if (had_)
            setenv("DRIFTWALK_THREADS", saved_.c_str(), 1);
        else
            unsetenv("DRIFTWALK_THREADS");
    }

  private:
    bool had_ = false;
    std::string saved_;
};

void register_selfcheck(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand(
        "selfcheck",
        "Run the built-in invariant battery (closed-form identities, "
        "cross-estimator agreement at 3 standard errors, determinism across "
        "worker counts); exits 4 if any check fails");
    auto io = make_io(cmd, "check,pass,detail");
    auto paths = std::make_shared<long>(20000);
    auto seed = std::make_shared<std::uint64_t>(0);
    io->bind("--paths", *paths, "trajectories per statistical check");
    io->bind("--seed", *seed, "RNG stream seed");
    cmd->callback([io, paths, seed]() {
        io->merge_config();
        Stopwatch watch;
        std::vector<CheckOutcome> checks;
        char buf[160];

        run_check(checks, "quantile-roundtrip", [&] {
            double worst = 0.0;
            for (int i = 1; i <= 40; ++i) {
                const double q = std::pow(10.0, -10.0 * i / 40.0);
                for (const double side : {q, 1.0 - q}) {
                    const double x = driftwalk::normal::inv_ccdf(side);
                    const double back = driftwalk::normal::ccdf(x);
                    worst = std::max(worst,
                                     std::fabs(back - side) / std::min(q, side));
                }
            }
            std::snprintf(buf, sizeof buf, "max scaled residual %.3g", worst);
            return std::make_pair(worst <= 1e-11, std::string(buf));
        });

        run_check(checks, "loss-reflection", [&] {
            double worst = 0.0;
            for (double x = -6.0; x <= 6.0; x += 0.25) {
                const double gap = driftwalk::normal::loss(-x) -
                                   driftwalk::normal::loss(x) - x;
                worst = std::max(worst, std::fabs(gap));
            }
            std::snprintf(buf, sizeof buf, "max identity gap %.3g", worst);
            return std::make_pair(worst <= 1e-13, std::string(buf));
        });

        run_check(checks, "envelope-order", [&] {
            for (const double alpha : {0.0, 0.3, 0.5, 0.8, 1.0})
                for (const double kappa : {-1.0, -0.3, 0.4, 1.0}) {
                    const driftwalk::BoundEstimate b =
                        driftwalk::bound_envelope(alpha, kappa, 1.0, 4000);
                    if (!(b.lower <= b.upper * (1.0 + 1e-12)))
                        return std::make_pair(false,
                                              std::string("lower > upper"));
                }
            return std::make_pair(true, std::string("20 regimes ordered"));
        });

        driftwalk::SimConfig cfg;
        cfg.paths = *paths;
        cfg.seed = *seed;

        run_check(checks, "linear-drift-mc", [&] {
            const driftwalk::McEstimate est = driftwalk::sample_LN(
                driftwalk::SupplyPolicy{1.0, 0.8},
                driftwalk::DemandModel{0.0, 1.0}, 300, cfg);
            const double exact = driftwalk::spitzer_exact(0.8, 1.0, 300);
            const double gap = std::fabs(est.mean - exact);
            std::snprintf(buf, sizeof buf, "|mc - exact| = %.3g vs 3se = %.3g",
                          gap, 3.0 * est.std_error);
            return std::make_pair(gap <= 3.0 * est.std_error,
                                  std::string(buf));
        });

        run_check(checks, "zero-drift-mc", [&] {
            const driftwalk::McEstimate est = driftwalk::sample_LN(
                driftwalk::SupplyPolicy{0.5, 0.0},
                driftwalk::DemandModel{0.0, 1.0}, 2500, cfg);
            const double exact = driftwalk::spitzer_exact(0.0, 1.0, 2500);
            const double gap = std::fabs(est.mean - exact);
            std::snprintf(buf, sizeof buf, "|mc - exact| = %.3g vs 3se = %.3g",
                          gap, 3.0 * est.std_error);
            return std::make_pair(gap <= 3.0 * est.std_error,
                                  std::string(buf));
        });

        run_check(checks, "worker-count-invariance", [&] {
            driftwalk::SimConfig small = cfg;
            small.paths = std::min<long>(*paths, 801);
            driftwalk::McEstimate one, three;
            {
                ThreadCountOverride guard("1");
                one = driftwalk::sample_LN(driftwalk::SupplyPolicy{0.5, 0.7},
                                           driftwalk::DemandModel{0.0, 1.0},
                                           400, small);
            }
            {
                ThreadCountOverride guard("3");
                three = driftwalk::sample_LN(driftwalk::SupplyPolicy{0.5, 0.7},
                                             driftwalk::DemandModel{0.0, 1.0},
                                             400, small);
            }
            const bool same = one.mean == three.mean &&
                              one.std_error == three.std_error;
            return std::make_pair(same, std::string(same
                                                        ? "bit-identical"
                                                        : "results diverge"));
        });

        run_check(checks, "surrogate-certificate", [&] {
            for (const double mult : {2.0, 2.5, 4.0, 10.0, 40.0}) {
                const driftwalk::CostParams costs{1.0, mult, 0, 0, 0};
                const driftwalk::RatioReport r =
                    driftwalk::ratio_report(costs, 1.0, 100);
                if (!(r.ratio >= 2.0 - 1e-12 &&
                      r.ratio <= r.ratio_upper_cert + 1e-9))
                    return std::make_pair(false, std::string(
                                                     "certificate violated"));
                if (mult == 2.0 && r.ratio != 2.0)
                    return std::make_pair(
                        false, std::string("balanced ratio not exactly 2"));
            }
            return std::make_pair(true, std::string("5 penalty levels hold"));
        });

        run_check(checks, "passage-consistency", [&] {
            driftwalk::SimConfig bm = cfg;
            bm.steps = 1000;
            const driftwalk::McEstimate direct =
                driftwalk::bm_crossing_probability(0.8, 0.6,
                                                   std::exp(2.0), bm);
            driftwalk::SimConfig ou = cfg;
            ou.steps = 500;
            ou.seed = cfg.seed + 1;
            const driftwalk::McEstimate changed =
                driftwalk::ou_passage_probability(-0.8, 0.6, 1.0, ou);
            const double gap = std::fabs(direct.mean - changed.mean);
            const double tol = 3.0 * std::sqrt(direct.std_error *
                                                   direct.std_error +
                                               changed.std_error *
                                                   changed.std_error) +
                               0.005;
            std::snprintf(buf, sizeof buf, "|direct - changed| = %.3g vs %.3g",
                          gap, tol);
            return std::make_pair(gap <= tol, std::string(buf));
        });

        bool all_pass = true;
        ojson list = ojson::array();
        std::vector<CsvRow> rows;
        for (const CheckOutcome& o : checks) {
            all_pass = all_pass && o.pass;
            ojson entry = ojson::object();
            entry["name"] = o.name;
            entry["pass"] = o.pass;
            entry["detail"] = o.detail;
            list.push_back(entry);
            rows.push_back({o.name, o.pass ? "1" : "0", o.detail});
        }
        ojson result = ojson::object();
        result["checks"] = list;
        result["all_pass"] = all_pass;
        finish("selfcheck", *io, *seed, result, watch.seconds(),
               "check,pass,detail", rows);
        if (!all_pass) throw selfcheck_failure("selfcheck found failures");
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "driftwalk: drift-band random walks, their expected running maxima, "
        "and the band-coefficient optimization built on them"};
    app.set_help_flag("--help", "print this help message and exit");
    app.set_version_flag("--version", driftwalk::version);
    app.require_subcommand(1);
    register_bounds(app);
    register_spitzer(app);
    register_simulate(app);
    register_rho(app);
    register_hitting(app);
    register_optimize(app);
    register_equivalence(app);
    register_selfcheck(app);

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const usage_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const driftwalk::numeric_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 4;
    } catch (const selfcheck_failure& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 4;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "failure: %s\n", e.what());
        return 4;
    }
}
