#pragma once

// The `qrw` command line. run() takes argv and two streams so tests can drive
// it in-process.
//
// Exit codes: 0 ok, 1 verify found a failing check, 2 bad input,
// 3 numerical failure (no convergence, singular point after retry).

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrw/absorption.hpp"
#include "qrw/coin.hpp"
#include "qrw/error.hpp"
#include "qrw/io.hpp"
#include "qrw/limit.hpp"
#include "qrw/pathsum.hpp"
#include "qrw/verify.hpp"
#include "qrw/walk.hpp"

namespace qrw::cli {

namespace detail {

struct Common {
    std::string type = "a";
    std::string coin = "hadamard";
    std::string state = "R";
    std::string format;  // empty until parsed; each subcommand has its own default
    std::string out;
};

inline void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
    sub->add_option("--type", c.type, "walk type: a or g")
        ->check(CLI::IsMember({"a", "A", "g", "G"}))
        ->capture_default_str();
    sub->add_option("--coin", c.coin, "hadamard | h_rho:<rho> | gudder:<a> | u:<eta>,<phi>,<psi> | raw:<8 numbers>")
        ->capture_default_str();
    sub->add_option("--state", c.state, "L | R | sym | raw:<a_re>,<a_im>,<b_re>,<b_im>")->capture_default_str();
    sub->add_option("--format", c.format, "csv or json (default " + default_format + ")")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out, "output file (default: standard output)");
}

// Writes to the --out file when given, otherwise to the stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw ParamOutOfRange("cannot open output file '" + path + "'");
            stream_ = file_.get();
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

inline void emit(const Common& c, std::ostream& out, const io::CsvTable& table, const nlohmann::json& doc) {
    Sink sink(c.out, out);
    if (c.format == "csv")
        io::write_csv(sink.get(), table);
    else
        io::write_json(sink.get(), doc);
}

inline int cmd_evolve(const Common& c, int steps, std::ostream& out) {
    if (steps < 0) throw ParamOutOfRange("--steps must be >= 0");
    const UnitaryCoin coin = parse_coin(c.coin);
    const QubitState state = parse_state(c.state);
    const AmplitudeField field = evolve(state, coin, parse_walk_type(c.type), steps);
    distribution(field);  // NormDrift check before anything is written
    emit(c, out, io::distribution_table(field), io::distribution_json(field, c.coin, c.state));
    return 0;
}

inline int cmd_moments(const Common& c, int steps, int max_m, std::ostream& out) {
    if (steps < 1) throw ParamOutOfRange("--steps must be >= 1");
    if (max_m < 1) throw ParamOutOfRange("--m must be >= 1");
    const UnitaryCoin coin = parse_coin(c.coin);
    const QubitState state = parse_state(c.state);
    const WalkType wt = parse_walk_type(c.type);
    const MomentContext ctx = make_moment_context(coin, wt, state);
    const Distribution dist = distribution(evolve(state, coin, wt, steps));
    io::CsvTable table{{"m", "closed_form", "evolution", "abs_diff"}, {}};
    nlohmann::json doc;
    doc["walk_type"] = to_string(wt);
    doc["coin"] = c.coin;
    doc["state"] = c.state;
    doc["steps"] = steps;
    doc["gamma"] = ctx.gamma_j;
    doc["theta"] = ctx.theta_j;
    doc["moments"] = nlohmann::json::array();
    for (int m = 1; m <= max_m; ++m) {
        const double closed = moment_closed_form(ctx, steps, m);
        const double emp = empirical_moment(dist, m);
        table.rows.push_back({double(m), closed, emp, std::abs(closed - emp)});
        doc["moments"].push_back({{"m", m}, {"closed_form", closed}, {"evolution", emp}});
    }
    emit(c, out, table, doc);
    return 0;
}

inline int cmd_symmetry(const Common& c, int steps, std::ostream& out) {
    if (steps < 1) throw ParamOutOfRange("--steps must be >= 1");
    const UnitaryCoin coin = parse_coin(c.coin);
    const QubitState state = parse_state(c.state);
    const WalkType wt = parse_walk_type(c.type);
    const bool sym = classify_symmetry(coin, wt, state);
    const double th = theta(coin, wt, state);
    const PQRSBasis basis = pqrs(coin, wt);
    AmplitudeField f = initial_field(state, wt);
    double mirror = 0.0, mean_abs = 0.0;
    for (int n = 1; n <= steps; ++n) {
        f = step(f, basis);
        const Distribution d = distribution(f);
        mean_abs = std::max(mean_abs, std::abs(mean(d)));
        for (int k = 0; k <= n; ++k) mirror = std::max(mirror, std::abs(d.at(k) - d.at(-k)));
    }
    io::CsvTable table{{"symmetric", "abs_alpha", "abs_beta", "theta", "max_mirror_residual", "max_abs_mean"},
                       {{sym ? 1.0 : 0.0, std::abs(state.alpha()), std::abs(state.beta()), th, mirror, mean_abs}}};
    nlohmann::json doc;
    doc["walk_type"] = to_string(wt);
    doc["coin"] = c.coin;
    doc["state"] = c.state;
    doc["symmetric"] = sym;
    doc["abs_alpha"] = std::abs(state.alpha());
    doc["abs_beta"] = std::abs(state.beta());
    doc["theta"] = th;
    doc["steps"] = steps;
    doc["max_mirror_residual"] = mirror;
    doc["max_abs_mean"] = mean_abs;
    emit(c, out, table, doc);
    return 0;
}

inline int cmd_density(const Common& c, int grid, double lo, double hi, std::ostream& out) {
    if (grid < 2) throw ParamOutOfRange("--grid must be >= 2");
    if (!(lo < hi)) throw ParamOutOfRange("--lo must be below --hi");
    const LimitDensity d = make_limit_density(parse_coin(c.coin), parse_walk_type(c.type), parse_state(c.state));
    io::CsvTable table{{"x", "f"}, {}};
    nlohmann::json doc;
    doc["walk_type"] = to_string(d.walk_type);
    doc["coin"] = c.coin;
    doc["state"] = c.state;
    doc["entries"] = nlohmann::json::array();
    for (int i = 0; i < grid; ++i) {
        const double x = lo + (hi - lo) * i / (grid - 1);
        const double f = density(d, x);
        table.rows.push_back({x, f});
        doc["entries"].push_back({x, f});
    }
    emit(c, out, table, doc);
    return 0;
}

inline int cmd_limit_stats(const Common& c, std::ostream& out) {
    const LimitDensity d = make_limit_density(parse_coin(c.coin), parse_walk_type(c.type), parse_state(c.state));
    io::CsvTable table{{"mean", "second_moment", "sd"}, {{limit_mean(d), limit_second_moment(d), limit_sd(d)}}};
    nlohmann::json doc;
    doc["mean"] = limit_mean(d);
    doc["second_moment"] = limit_second_moment(d);
    doc["sd"] = limit_sd(d);
    emit(c, out, table, doc);
    return 0;
}

struct AbsorbArgs {
    std::string mode = "semi";
    int n_sites = 0;
    int k = 1;
    int cap = 0;
    bool emit_series = false;
    std::string series_out;
};

inline int cmd_absorb(const Common& c, const AbsorbArgs& a, std::ostream& out) {
    const UnitaryCoin coin = parse_coin(c.coin);
    const QubitState state = parse_state(c.state);
    const WalkType wt = parse_walk_type(c.type);
    if (a.cap < 0) throw ParamOutOfRange("--cap must be >= 0");
    const bool finite = a.mode == "finite";
    if (finite && a.n_sites == 0) throw ParamOutOfRange("--mode finite needs --N");
    const AbsorptionSpec spec =
        finite ? AbsorptionSpec::finite(coin, wt, a.n_sites, a.k) : AbsorptionSpec::semi_infinite(coin, wt, a.k);
    AbsorptionOptions opt;
    opt.cap = a.cap;
    const AbsorptionResult res = absorption_prob(spec, state, opt);

    nlohmann::json doc;
    nlohmann::json sp;
    sp["walk_type"] = to_string(wt);
    sp["coin"] = c.coin;
    sp["state"] = c.state;
    sp["mode"] = finite ? "finite" : "semi";
    if (finite) sp["N"] = a.n_sites;
    sp["k"] = a.k;
    doc["spec"] = sp;
    doc["prob"] = res.prob;
    doc["n_used"] = res.n_used;
    doc["tail_bound"] = res.tail_bound;
    doc["cond_mean_T0"] = res.cond_mean_T0;
    doc["converged"] = res.converged;
    if (!finite && a.k == 1 && is_hadamard(coin)) {
        const double closed = semi_infinite_closed(coin, state, wt);
        doc["closed_form"] = closed;
        doc["cond_mean_T0_closed"] = 1.0 / closed;
    }
    if (finite && a.k == 1) doc["conjecture_rhs"] = conjecture_rhs(a.n_sites);

    {
        Sink sink(c.out, out);
        if (c.format == "json") {
            io::write_json(sink.get(), doc);
        } else {
            io::CsvTable table{{"prob", "n_used", "tail_bound", "cond_mean_T0", "converged"},
                               {{res.prob, double(res.n_used), res.tail_bound, res.cond_mean_T0,
                                 res.converged ? 1.0 : 0.0}}};
            io::write_csv(sink.get(), table);
        }
        if (a.emit_series) {
            const HittingSeries series = hitting_series(spec, res.n_used);
            if (a.series_out.empty()) {
                io::write_csv(sink.get(), io::series_table(series, state));
            } else {
                Sink file(a.series_out, out);
                io::write_csv(file.get(), io::series_table(series, state));
            }
        }
    }
    if (!res.converged)
        throw NoConvergence("truncation cap reached with tail bound " + verify::sci(res.tail_bound));
    return 0;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact simulation and closed forms for two-state quantum walks", "qrw"};
    app.require_subcommand(1);

    detail::Common common;
    int steps = 100;
    int max_m = 4;
    int grid = 201;
    double lo = -1.0, hi = 1.0;
    detail::AbsorbArgs absorb;
    std::string suite = "all";
    verify::Options vopt;

    auto* evolve_cmd = app.add_subcommand("evolve", "amplitude evolution on the integers; emits the distribution");
    detail::add_common(evolve_cmd, common, "csv");
    evolve_cmd->add_option("--steps", steps, "number of steps")->capture_default_str();

    auto* moments_cmd = app.add_subcommand("moments", "closed-form moments E(X_n^m), m = 1..M, beside evolution");
    detail::add_common(moments_cmd, common, "csv");
    moments_cmd->add_option("--steps", steps, "time n")->capture_default_str();
    moments_cmd->add_option("--m", max_m, "highest moment order M")->capture_default_str();

    auto* sym_cmd = app.add_subcommand("symmetry", "classify the state and measure mirror symmetry up to --steps");
    detail::add_common(sym_cmd, common, "json");
    sym_cmd->add_option("--steps", steps, "largest time checked")->capture_default_str();

    auto* density_cmd = app.add_subcommand("density", "limit density of X_n/n on a grid");
    detail::add_common(density_cmd, common, "csv");
    density_cmd->add_option("--grid", grid, "number of grid points")->capture_default_str();
    density_cmd->add_option("--lo", lo, "left end of the grid")->capture_default_str();
    density_cmd->add_option("--hi", hi, "right end of the grid")->capture_default_str();

    auto* stats_cmd = app.add_subcommand("limit-stats", "mean, second moment and sd of the limit law");
    detail::add_common(stats_cmd, common, "json");

    auto* absorb_cmd = app.add_subcommand("absorb", "probability of ever hitting 0 under step-and-measure");
    detail::add_common(absorb_cmd, common, "json");
    absorb_cmd->add_option("--mode", absorb.mode, "semi (half line) or finite ({0..N})")
        ->check(CLI::IsMember({"semi", "finite"}))
        ->capture_default_str();
    absorb_cmd->add_option("--N", absorb.n_sites, "right boundary for --mode finite");
    absorb_cmd->add_option("--k", absorb.k, "start site")->capture_default_str();
    absorb_cmd->add_option("--cap", absorb.cap, "truncation cap (0: 2e5 finite, 1e5 half line)")
        ->capture_default_str();
    absorb_cmd->add_flag("--emit-series", absorb.emit_series, "also write n,P_n,p_re,p_im,r_re,r_im");
    absorb_cmd->add_option("--series-out", absorb.series_out, "file for the series CSV (default: after the result)");

    auto* verify_cmd = app.add_subcommand("verify", "run a built-in check battery");
    verify_cmd->add_option("suite", suite, "pqrs | lemma1 | moments | symmetry | limit | absorption | conjecture | all")
        ->check(CLI::IsMember(verify::suite_names()))
        ->capture_default_str();
    verify_cmd->add_option("--n-max", vopt.conjecture_n_max, "largest N for the conjecture suite")
        ->capture_default_str();
    verify_cmd->add_option("--seed", vopt.seed, "seed for the random samples")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    auto with_default = [&](const char* fmt) -> detail::Common& {
        if (common.format.empty()) common.format = fmt;
        return common;
    };
    try {
        if (evolve_cmd->parsed()) return detail::cmd_evolve(with_default("csv"), steps, out);
        if (moments_cmd->parsed()) return detail::cmd_moments(with_default("csv"), steps, max_m, out);
        if (sym_cmd->parsed()) return detail::cmd_symmetry(with_default("json"), steps, out);
        if (density_cmd->parsed()) return detail::cmd_density(with_default("csv"), grid, lo, hi, out);
        if (stats_cmd->parsed()) return detail::cmd_limit_stats(with_default("json"), out);
        if (absorb_cmd->parsed()) return detail::cmd_absorb(with_default("json"), absorb, out);
        if (verify_cmd->parsed()) {
            const int failures = verify::run_suite(suite, out, vopt);
            out << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed") << '\n';
            return failures == 0 ? 0 : 1;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_numerical_failure(e) ? 3 : 2;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace qrw::cli
