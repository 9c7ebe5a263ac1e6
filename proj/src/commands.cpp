#include "ndlimit/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "ndlimit/snapshot.hpp"
#include "ndlimit/util.hpp"

namespace ndlimit {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
    os << text;
}

// Wall-clock timestamps are confined to this one file so reruns stay
// byte-identical everywhere else.
void write_metadata(const fs::path& dir, const std::string& command,
                    const std::string& hash) {
    auto now = std::chrono::system_clock::now();
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch());
    json meta = {{"command", command},
                 {"config_hash", hash},
                 {"unix_time", secs.count()}};
    write_text(dir / "run_metadata.json", meta.dump(2) + "\n");
}

int fail(const fs::path& dir, const std::string& command, const json& failures) {
    json doc = {{"command", command}, {"failures", failures}};
    write_text(dir / "failure.json", doc.dump(2) + "\n");
    return exit_assertion;
}

void write_trace_csv(const fs::path& path, const std::vector<TraceRow>& rows,
                     const std::string& hash) {
    std::string text = "# config_hash=" + hash + "\n";
    text += "iteration,energy,residual,omega,uminus_norm\n";
    for (const auto& r : rows) {
        text += std::to_string(r.iteration) + ',' + format_double(r.energy) + ',' +
                format_double(r.residual) + ',' + format_double(r.omega) + ',' +
                format_double(r.uminus_norm) + '\n';
    }
    write_text(path, text);
}

std::string plot_script(const std::string& hash, const std::string& title,
                        const std::string& out_png, const std::string& using_expr,
                        bool loglog) {
    std::string s;
    s += "# config_hash=" + hash + "\n";
    s += "set datafile separator comma\n";
    s += "set key autotitle columnhead\n";
    s += "set term png size 800,600\n";
    s += "set output '" + out_png + "'\n";
    s += "set title '" + title + "'\n";
    s += "set xlabel 'c'\n";
    if (loglog) s += "set logscale xy\n";
    s += "plot 'sweep.csv' using " + using_expr + " with linespoints\n";
    return s;
}

json record_json(const SweepRecord& r) {
    return json{{"c", r.c},
                {"omega", r.omega},
                {"gap", r.gap},
                {"a_n", r.a_n},
                {"b_n", r.b_n},
                {"g_H1", r.g_H1},
                {"f_dist_H1", r.f_dist_H1},
                {"energy_gap", r.energy_gap},
                {"decay_delta", r.decay_delta},
                {"decay_r2", r.decay_r2},
                {"green_delta", r.green_delta},
                {"converged", r.converged}};
}

int cmd_solve_dirac(const RunConfig& cfg, const DispatchOptions& opts,
                    const fs::path& dir, const std::string& hash) {
    GridSpec grid = cfg.make_grid();
    PotentialSet pot = build_potentials(grid, cfg.params);
    SpinorField w0 = initial_guess(grid, pot, cfg.params, cfg.solver.guess_width);
    DiracSolveResult res = outer_minimize(w0, cfg.solver, pot, cfg.params);

    json doc = {{"config_hash", hash},
                {"c", cfg.params.c},
                {"omega", res.omega},
                {"energy", res.energy},
                {"residual", res.residual},
                {"gap", cfg.params.mc2() - res.omega},
                {"outer_iterations", res.outer_iterations},
                {"inner_iterations", res.inner_iterations},
                {"evaluations", res.evaluations},
                {"converged", res.converged},
                {"monotone", res.monotone},
                {"cap_hit", res.cap_hit},
                {"l2_norm", norm_l2(res.u)}};
    write_text(dir / "dirac_result.json", doc.dump(2) + "\n");
    write_snapshot((dir / "u.dspn").string(), res.u);
    if (!opts.trace_path.empty()) write_trace_csv(opts.trace_path, res.trace, hash);

    json failures = json::array();
    if (!res.converged) failures.push_back({{"name", "converged"}, {"detail", "solver did not reach outer_tol"}});
    if (res.converged && !(res.omega > 0.0 && res.omega < cfg.params.mc2()))
        failures.push_back({{"name", "multiplier_window"},
                            {"detail", "omega outside (0, m c^2)"}});
    if (std::abs(norm_l2(res.u) - 1.0) > 1e-8)
        failures.push_back({{"name", "unit_norm"}, {"detail", "|u|_L2 != 1"}});
    if (!failures.empty()) return fail(dir, "solve-dirac", failures);
    return exit_ok;
}

int cmd_solve_nls(const RunConfig& cfg, const fs::path& dir, const std::string& hash) {
    GridSpec grid = cfg.make_grid();
    PotentialSet pot = build_potentials(grid, cfg.params);
    MultistartNls ms = nls_ground_state_multistart(cfg.nls, pot, cfg.params);

    json doc = {{"config_hash", hash},
                {"nu", ms.best.nu},
                {"energy", ms.best.energy},
                {"residual", ms.best.residual},
                {"iterations", ms.best.iterations},
                {"converged", ms.best.converged},
                {"multistart_energy_difference", ms.energy_difference},
                {"multistart_profile_difference", ms.profile_difference},
                {"multistart_agreed", ms.agreed},
                {"l2_norm", norm_l2(ms.best.h)}};
    write_text(dir / "nls_result.json", doc.dump(2) + "\n");
    write_snapshot((dir / "h.dspn").string(), ms.best.h);

    json failures = json::array();
    if (!ms.best.converged)
        failures.push_back({{"name", "converged"}, {"detail", "solver did not reach tol"}});
    if (!(ms.best.nu > 0.0))
        failures.push_back({{"name", "nu_positive"}, {"detail", "nu <= 0"}});
    if (!ms.agreed)
        failures.push_back({{"name", "multistart_agreement"},
                            {"detail", "independent starts disagree"}});
    if (!failures.empty()) return fail(dir, "solve-nls", failures);
    return exit_ok;
}

int cmd_limit_sweep(const RunConfig& cfg, const DispatchOptions& opts,
                    const fs::path& dir, const std::string& hash) {
    GridSpec grid = cfg.make_grid();
    PotentialSet pot = build_potentials(grid, cfg.params);
    SweepOutput sweep = run_sweep(cfg.c_list, cfg.solver, cfg.nls, cfg.harness, pot,
                                  cfg.params);
    write_text(dir / "sweep.csv", sweep_csv(sweep.records, "config_hash=" + hash));
    write_snapshot((dir / "h.dspn").string(), sweep.nls.h);
    if (!sweep.solves.empty())
        write_snapshot((dir / "u_final.dspn").string(), sweep.solves.back().u);
    if (!opts.trace_path.empty()) {
        for (std::size_t i = 0; i < sweep.solves.size(); ++i) {
            fs::path tp(opts.trace_path);
            fs::path stem = tp.stem();
            fs::path base = tp.parent_path() / stem;
            std::string cpart = format_double(sweep.records[i].c);
            write_trace_csv(base.string() + "_c" + cpart + tp.extension().string(),
                            sweep.solves[i].trace, hash);
        }
    }

    ConsistencyReport rep = consistency_report(sweep.records, sweep.nls, cfg.params,
                                               cfg.harness);
    json jc = json::array();
    for (const auto& cr : rep.criteria)
        jc.push_back({{"name", cr.name}, {"pass", cr.pass}, {"detail", cr.detail}});
    json doc = {{"config_hash", hash},
                {"nu", rep.nu},
                {"nu_over_m", rep.nu_over_m},
                {"nu_over_2m", rep.nu_over_2m},
                {"criteria", jc},
                {"records", json::array()},
                {"all_pass", rep.all_pass}};
    for (const auto& r : sweep.records) doc["records"].push_back(record_json(r));
    write_text(dir / "consistency_report.json", doc.dump(2) + "\n");

    write_text(dir / "plot_gap_vs_c.gp",
               plot_script(hash, "multiplier gap m c^2 - omega_c", "gap_vs_c.png",
                           "'c':'gap'", false));
    write_text(dir / "plot_g_norm_loglog.gp",
               plot_script(hash, "lower spinor |g_c|_H1 (log-log)", "g_norm_loglog.png",
                           "'c':'g_H1'", true));
    write_text(dir / "plot_f_dist_vs_c.gp",
               plot_script(hash, "aligned |f_c - h|_H1", "f_dist_vs_c.png",
                           "'c':'f_dist_H1'", false));

    if (!rep.all_pass) {
        json failures = json::array();
        for (const auto& cr : rep.criteria)
            if (!cr.pass) failures.push_back({{"name", cr.name}, {"detail", cr.detail}});
        return fail(dir, "limit-sweep", failures);
    }
    return exit_ok;
}

int cmd_check_inequalities(const RunConfig& cfg, const fs::path& dir,
                           const std::string& hash) {
    GridSpec grid = cfg.make_grid();
    PotentialSet pot = build_potentials(grid, cfg.params);
    SuiteConfig scfg = cfg.inequalities;
    scfg.seed = cfg.seed;
    if (const char* env = std::getenv("NDLIMIT_WORKERS")) {
        int w = std::atoi(env);
        if (w >= 1) scfg.workers = w;
    }
    std::vector<CheckReport> reports = run_inequality_suite(scfg, grid, pot, cfg.params);

    json checks = json::object();
    bool all = true;
    for (const auto& r : reports) {
        json jr = {{"samples", r.samples},
                   {"rejected", r.rejected},
                   {"max_ratio", r.max_ratio},
                   {"max_ratio_2n", r.max_ratio_2n},
                   {"stability_ratio", r.stability_ratio},
                   {"homogeneity_dev", r.homogeneity_dev},
                   {"pass", r.pass}};
        if (r.name == "splitting") jr["min_feasible_c"] = r.min_feasible_c;
        checks[r.name] = jr;
        all = all && r.pass;
    }
    json doc = {{"config_hash", hash}, {"checks", checks}, {"all_pass", all}};
    write_text(dir / "inequalities.json", doc.dump(2) + "\n");

    if (!all) {
        json failures = json::array();
        for (const auto& r : reports)
            if (!r.pass)
                failures.push_back(
                    {{"name", r.name},
                     {"detail", "stability " + format_double(r.stability_ratio) +
                                    ", homogeneity dev " + format_double(r.homogeneity_dev)}});
        return fail(dir, "check-inequalities", failures);
    }
    return exit_ok;
}

int cmd_decay_fit(const RunConfig& cfg, const DispatchOptions& opts,
                  const fs::path& dir, const std::string& hash) {
    if (opts.input_path.empty())
        throw ConfigError("decay-fit requires an input snapshot (--in)");
    AnyField f = read_snapshot(opts.input_path);
    double L = std::visit([](const auto& g) { return g.grid().half_width(); }, f);
    double r1 = L / 4.0, r2 = L / 2.0;
    if (cfg.harness.decay_window) {
        r1 = (*cfg.harness.decay_window)[0];
        r2 = (*cfg.harness.decay_window)[1];
    }
    DecayFit fit = std::visit([&](const auto& g) { return fit_decay_rate(g, r1, r2); }, f);
    json doc = {{"config_hash", hash},
                {"input", opts.input_path},
                {"window", {r1, r2}},
                {"delta", fit.delta},
                {"r_squared", fit.r_squared},
                {"bins_used", fit.bins_used},
                {"exponential_fit_ok", fit.r_squared >= cfg.harness.decay_r2_min}};
    write_text(dir / "decay_fit.json", doc.dump(2) + "\n");
    return exit_ok;
}

}  // namespace

int dispatch(const std::string& command, const RunConfig& cfg,
             const DispatchOptions& opts) {
    fs::path dir(opts.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::exists(dir)) {
        return exit_usage;
    }
    const std::string hash = config_hash(cfg);
    write_metadata(dir, command, hash);
    try {
        if (command == "solve-dirac") return cmd_solve_dirac(cfg, opts, dir, hash);
        if (command == "solve-nls") return cmd_solve_nls(cfg, dir, hash);
        if (command == "limit-sweep") return cmd_limit_sweep(cfg, opts, dir, hash);
        if (command == "check-inequalities") return cmd_check_inequalities(cfg, dir, hash);
        if (command == "decay-fit") return cmd_decay_fit(cfg, opts, dir, hash);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        json failures = json::array();
        failures.push_back({{"name", "exception"}, {"detail", e.what()}});
        return fail(dir, command, failures);
    }
    throw ConfigError("unknown command '" + command + "'");
}

}  // namespace ndlimit
