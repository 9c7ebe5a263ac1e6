#include "ndlimit/config.hpp"

#include <set>

#include <json.hpp>

#include "ndlimit/util.hpp"

namespace ndlimit {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + where + it.key() + "'");
    }
}

template <typename T>
void fetch(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) {
        try {
            out = obj.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(std::string("bad value type for key '") + key + "'");
        }
    }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");

    RunConfig cfg;
    reject_unknown(root, "",
                   {"grid", "params", "solver", "nls", "harness", "inequalities",
                    "seed", "output_dir"});

    if (root.contains("grid")) {
        const json& g = root["grid"];
        reject_unknown(g, "grid.", {"n", "half_width"});
        fetch(g, "n", cfg.grid_n);
        fetch(g, "half_width", cfg.grid_half_width);
        if (cfg.grid_n < 8 || cfg.grid_n % 2 != 0)
            throw ConfigError("parameter 'grid.n' = " + std::to_string(cfg.grid_n) +
                              " outside admissible window {even integers >= 8}");
        if (!(cfg.grid_half_width > 0.0))
            throw ConfigError("parameter 'grid.half_width' must be positive");
    }
    if (root.contains("params")) {
        const json& p = root["params"];
        reject_unknown(p, "params.", {"m", "c", "c_list", "kappa", "s", "a", "mu", "tau"});
        fetch(p, "m", cfg.params.m);
        fetch(p, "c", cfg.params.c);
        fetch(p, "kappa", cfg.params.kappa);
        fetch(p, "s", cfg.params.s);
        fetch(p, "a", cfg.params.a);
        fetch(p, "mu", cfg.params.mu);
        fetch(p, "tau", cfg.params.tau);
        if (p.contains("c_list")) {
            cfg.c_list.clear();
            for (const auto& v : p.at("c_list")) cfg.c_list.push_back(v.get<double>());
        }
        try {
            cfg.params.validate();
        } catch (const ParamWindowError& e) {
            throw ConfigError(std::string("params: ") + e.what());
        }
        for (double c : cfg.c_list)
            if (!(c > 0.0)) throw ConfigError("params.c_list entries must be positive");
    }
    if (root.contains("solver")) {
        const json& s = root["solver"];
        reject_unknown(s, "solver.",
                       {"inner_tol", "outer_tol", "inner_max_iter", "outer_max_iter",
                        "step0", "minus_norm_cap", "warm_start", "guess_width"});
        fetch(s, "inner_tol", cfg.solver.inner_tol);
        fetch(s, "outer_tol", cfg.solver.outer_tol);
        fetch(s, "inner_max_iter", cfg.solver.inner_max_iter);
        fetch(s, "outer_max_iter", cfg.solver.outer_max_iter);
        fetch(s, "step0", cfg.solver.step0);
        fetch(s, "minus_norm_cap", cfg.solver.minus_norm_cap);
        fetch(s, "warm_start", cfg.solver.warm_start);
        fetch(s, "guess_width", cfg.solver.guess_width);
        try {
            cfg.solver.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("solver: ") + e.what());
        }
    }
    if (root.contains("nls")) {
        const json& s = root["nls"];
        reject_unknown(s, "nls.",
                       {"tol", "max_iter", "guess_width", "multistart_width_a",
                        "multistart_width_b"});
        fetch(s, "tol", cfg.nls.tol);
        fetch(s, "max_iter", cfg.nls.max_iter);
        fetch(s, "guess_width", cfg.nls.guess_width);
        fetch(s, "multistart_width_a", cfg.nls.multistart_width_a);
        fetch(s, "multistart_width_b", cfg.nls.multistart_width_b);
        try {
            cfg.nls.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("nls: ") + e.what());
        }
    }
    if (root.contains("harness")) {
        const json& h = root["harness"];
        reject_unknown(h, "harness.",
                       {"decay_window", "gap_ratio_max", "f_dist_final_tol",
                        "energy_gap_final_tol", "g_slope_range", "decay_r2_min",
                        "decay_delta_factor", "b_n_final_rel_tol"});
        if (h.contains("decay_window") && !h.at("decay_window").is_null()) {
            auto w = h.at("decay_window").get<std::vector<double>>();
            if (w.size() != 2 || !(w[0] > 0.0 && w[1] > w[0]))
                throw ConfigError("harness.decay_window must be [r1, r2] with 0 < r1 < r2");
            cfg.harness.decay_window = {w[0], w[1]};
        }
        fetch(h, "gap_ratio_max", cfg.harness.gap_ratio_max);
        fetch(h, "f_dist_final_tol", cfg.harness.f_dist_final_tol);
        fetch(h, "energy_gap_final_tol", cfg.harness.energy_gap_final_tol);
        if (h.contains("g_slope_range")) {
            auto w = h.at("g_slope_range").get<std::vector<double>>();
            if (w.size() != 2 || !(w[0] < w[1]))
                throw ConfigError("harness.g_slope_range must be [lo, hi] with lo < hi");
            cfg.harness.g_slope_range = {w[0], w[1]};
        }
        fetch(h, "decay_r2_min", cfg.harness.decay_r2_min);
        fetch(h, "decay_delta_factor", cfg.harness.decay_delta_factor);
        fetch(h, "b_n_final_rel_tol", cfg.harness.b_n_final_rel_tol);
    }
    if (root.contains("inequalities")) {
        const json& q = root["inequalities"];
        reject_unknown(q, "inequalities.",
                       {"samples", "cutoff_fraction", "stability_factor",
                        "homogeneity_tol", "s_exp", "p_exp", "workers"});
        fetch(q, "samples", cfg.inequalities.samples);
        fetch(q, "cutoff_fraction", cfg.inequalities.cutoff_fraction);
        fetch(q, "stability_factor", cfg.inequalities.stability_factor);
        fetch(q, "homogeneity_tol", cfg.inequalities.homogeneity_tol);
        fetch(q, "s_exp", cfg.inequalities.s_exp);
        fetch(q, "p_exp", cfg.inequalities.p_exp);
        fetch(q, "workers", cfg.inequalities.workers);
        if (cfg.inequalities.samples < 1)
            throw ConfigError("inequalities.samples must be >= 1");
        if (!(cfg.inequalities.cutoff_fraction > 0.0 &&
              cfg.inequalities.cutoff_fraction <= 2.0 / 3.0))
            throw ConfigError(
                "parameter 'inequalities.cutoff_fraction' outside admissible window (0, 2/3]");
    }
    fetch(root, "seed", cfg.seed);
    if (root.contains("output_dir") && !root.at("output_dir").is_null())
        cfg.output_dir = root.at("output_dir").get<std::string>();
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    json root;
    root["grid"] = {{"n", cfg.grid_n}, {"half_width", cfg.grid_half_width}};
    root["params"] = {{"m", cfg.params.m},       {"c", cfg.params.c},
                      {"c_list", cfg.c_list},    {"kappa", cfg.params.kappa},
                      {"s", cfg.params.s},       {"a", cfg.params.a},
                      {"mu", cfg.params.mu},     {"tau", cfg.params.tau}};
    root["solver"] = {{"inner_tol", cfg.solver.inner_tol},
                      {"outer_tol", cfg.solver.outer_tol},
                      {"inner_max_iter", cfg.solver.inner_max_iter},
                      {"outer_max_iter", cfg.solver.outer_max_iter},
                      {"step0", cfg.solver.step0},
                      {"minus_norm_cap", cfg.solver.minus_norm_cap},
                      {"warm_start", cfg.solver.warm_start},
                      {"guess_width", cfg.solver.guess_width}};
    root["nls"] = {{"tol", cfg.nls.tol},
                   {"max_iter", cfg.nls.max_iter},
                   {"guess_width", cfg.nls.guess_width},
                   {"multistart_width_a", cfg.nls.multistart_width_a},
                   {"multistart_width_b", cfg.nls.multistart_width_b}};
    json harness;
    if (cfg.harness.decay_window)
        harness["decay_window"] = {(*cfg.harness.decay_window)[0],
                                   (*cfg.harness.decay_window)[1]};
    else
        harness["decay_window"] = nullptr;
    harness["gap_ratio_max"] = cfg.harness.gap_ratio_max;
    harness["f_dist_final_tol"] = cfg.harness.f_dist_final_tol;
    harness["energy_gap_final_tol"] = cfg.harness.energy_gap_final_tol;
    harness["g_slope_range"] = {cfg.harness.g_slope_range[0], cfg.harness.g_slope_range[1]};
    harness["decay_r2_min"] = cfg.harness.decay_r2_min;
    harness["decay_delta_factor"] = cfg.harness.decay_delta_factor;
    harness["b_n_final_rel_tol"] = cfg.harness.b_n_final_rel_tol;
    root["harness"] = harness;
    root["inequalities"] = {{"samples", cfg.inequalities.samples},
                            {"cutoff_fraction", cfg.inequalities.cutoff_fraction},
                            {"stability_factor", cfg.inequalities.stability_factor},
                            {"homogeneity_tol", cfg.inequalities.homogeneity_tol},
                            {"s_exp", cfg.inequalities.s_exp},
                            {"p_exp", cfg.inequalities.p_exp},
                            {"workers", cfg.inequalities.workers}};
    root["seed"] = cfg.seed;
    if (cfg.output_dir)
        root["output_dir"] = *cfg.output_dir;
    else
        root["output_dir"] = nullptr;
    return root.dump(2);
}

std::string config_hash(const RunConfig& cfg) {
    return hex64(fnv1a64(serialize_config(cfg)));
}

}  // namespace ndlimit
