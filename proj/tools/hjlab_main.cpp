// Command-line front end: experiment registry, audits, ergodic
// constructions, and control runs.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hjlab/analysis.hpp"
#include "hjlab/config.hpp"
#include "hjlab/control.hpp"
#include "hjlab/csv.hpp"
#include "hjlab/ergodic.hpp"
#include "hjlab/registry.hpp"

namespace {

using namespace hjlab;

struct CommonFlags {
    std::string config_path;
    std::string id;
    std::vector<std::pair<std::string, std::string>> overrides;
};

void add_override_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "flat key = value config file");
    auto push = [&flags](const std::string& key) {
        return [&flags, key](const std::string& v) { flags.overrides.emplace_back(key, v); };
    };
    cmd->add_option_function<std::string>("--scheme", push("scheme"),
                                          "godunov | lax-friedrichs | semi-lagrangian");
    cmd->add_option_function<std::string>("--dx", push("dx"), "grid spacing");
    cmd->add_option_function<std::string>("--cfl", push("cfl"), "CFL number in (0,1]");
    cmd->add_option_function<std::string>("--T", push("T"), "time horizon");
    cmd->add_option_function<std::string>("--x-min", push("x_min"), "left domain end");
    cmd->add_option_function<std::string>("--x-max", push("x_max"), "right domain end");
    cmd->add_option_function<std::string>("--c", push("c"), "ergodic constant / lambda");
    cmd->add_option_function<std::string>("--eps", push("eps"), "convolution parameter");
    cmd->add_option_function<std::string>("--tol", push("tol"), "pass tolerance");
    cmd->add_option_function<std::string>("--window", push("window"), "monitor window lo,hi");
    cmd->add_option_function<std::string>("--snapshot-stride", push("snapshot_stride"),
                                          "store every k-th step");
    cmd->add_option_function<std::string>("--boundary", push("boundary"),
                                          "one-sided-upwind | frozen-extension");
}

RunConfig build_config(const CommonFlags& flags) {
    RunConfig cfg;
    if (!flags.config_path.empty()) cfg = parse_config_file(flags.config_path);
    RunConfig cli;
    for (const auto& [k, v] : flags.overrides) apply_config_entry(cli, k, v);
    cfg = merge_configs(cfg, cli);
    if (!flags.id.empty()) cfg.id = flags.id;
    validate_config(cfg);
    return cfg;
}

int print_result(const ExperimentResult& res) {
    std::cout << res.summary_text();
    std::cout << "artifacts: " << res.artifact_dir.string() << "\n";
    return res.all_pass ? 0 : 1;
}

int cmd_list(const std::string& tag, bool empty) {
    auto entries = empty ? experiment_registry(true)
                         : (tag.empty() ? experiment_registry() : experiments_with_tag(tag));
    for (const auto& e : entries) {
        std::string tags;
        for (const auto& t : e.tags) tags += (tags.empty() ? "" : ",") + t;
        std::printf("%-18s %-5s %-28s %s\n", e.id.c_str(), e.section.c_str(), tags.c_str(),
                    e.description.c_str());
    }
    return 0;
}

int cmd_run(const CommonFlags& flags, const std::filesystem::path& root) {
    RunConfig cfg = build_config(flags);
    ensure_arg(!cfg.id.empty(), "run: experiment id required (positional or via config)");
    return print_result(run_experiment(cfg.id, cfg, root));
}

int cmd_run_all(const CommonFlags& flags, const std::string& tag,
                const std::filesystem::path& root) {
    RunConfig cfg = build_config(flags);
    auto entries = tag.empty() ? experiment_registry() : experiments_with_tag(tag);
    int status = 0;
    for (const auto& e : entries) {
        std::cout << "== " << e.id << "\n";
        status |= print_result(run_experiment(e.id, cfg, root));
    }
    return status;
}

int cmd_audit(const CommonFlags& flags) {
    RunConfig cfg = build_config(flags);
    ensure_arg(!cfg.id.empty(), "audit: experiment id required");
    const ExperimentSpec* spec = find_experiment(cfg.id);
    ensure_arg(spec != nullptr, "unknown experiment id '" + cfg.id + "'");
    RunConfig merged = merge_configs(spec->defaults, cfg);

    Grid grid = make_uniform_grid(*merged.x_min, *merged.x_max,
                                  static_cast<int>(std::llround((*merged.x_max - *merged.x_min) /
                                                                *merged.dx)) +
                                      1);
    HamiltonianSpec h =
        HamiltonianSpec::eikonal([](double) { return 1.0; }, grid.x_min, grid.x_max);
    auto cost_fn = cfg.id == "ex-remark-4-2"
                       ? std::function<double(double)>([](double x) { return std::abs(std::sin(x)); })
                       : std::function<double(double)>([](double x) { return 1.0 + std::abs(x); });
    auto [cost, shift] = normalize_cost(ScalarField::sample(grid, cost_fn));
    double pmax = 2.0 + max_value(cost);
    double eta = 0.05 * (max_value(cost) - min_value(cost));
    AuditReport rep =
        audit_assumptions(h, cost, SampleBox{grid.x_min, grid.x_max, -pmax, pmax, 41, 41}, eta);
    std::cout << rep.to_text();
    return rep.all_pass() ? 0 : 1;
}

int cmd_ergodic(const CommonFlags& flags, const std::filesystem::path& root) {
    RunConfig cfg = build_config(flags);
    ensure_arg(!cfg.id.empty(), "ergodic: experiment id required");
    const ExperimentSpec* spec = find_experiment(cfg.id);
    ensure_arg(spec != nullptr, "unknown experiment id '" + cfg.id + "'");
    RunConfig merged = merge_configs(spec->defaults, cfg);

    auto dir = root / (cfg.id + "-ergodic");
    std::filesystem::create_directories(dir);

    Grid grid = make_uniform_grid(*merged.x_min, *merged.x_max,
                                  static_cast<int>(std::llround((*merged.x_max - *merged.x_min) /
                                                                *merged.dx)) +
                                      1);
    HamiltonianSpec h =
        HamiltonianSpec::eikonal([](double) { return 1.0; }, grid.x_min, grid.x_max);
    auto cost_fn = cfg.id == "ex-remark-4-2"
                       ? std::function<double(double)>([](double x) { return std::abs(std::sin(x)); })
                       : std::function<double(double)>([](double x) { return std::abs(x); });
    ScalarField cost = ScalarField::sample(grid, cost_fn);
    AubrySet aubry = extract_aubry(cost, default_aubry_tol(cost));

    ErgodicSolution perron = solve_perron_min(h, cost, aubry);
    ResidualReport res = residual_stationary(perron.v, h, cost, 0.0);
    write_ergodic_solution(perron, dir / "perron.csv", dir / "perron.meta.txt",
                           res.sup_interior, res.l1_interior);
    std::cout << "perron: c = 0, residual sup = " << res.sup_interior << "\n";

    // Nonuniqueness across the default c-grid.
    double reach = std::min(std::abs(grid.x_min), grid.x_max);
    std::vector<double> radii;
    for (double r = 2.0; r <= reach - 1.0; r += 1.0) radii.push_back(r);
    for (double c : {0.0, 0.5, 1.0, 2.0}) {
        if (merged.c) c = *merged.c; // explicit override collapses the grid
        DirichletLimitResult lim = dirichlet_limit(h, cost_fn, c, radii, *merged.dx,
                                                   merged.window.value_or(std::make_pair(-2.0, 2.0)));
        ScalarField inner_cost = ScalarField::sample(lim.solution.v.grid, cost_fn);
        ResidualReport lres = residual_stationary(lim.solution.v, h, inner_cost, c);
        std::string base = "dirichlet-c" + format_double(c);
        write_ergodic_solution(lim.solution, dir / (base + ".csv"), dir / (base + ".meta.txt"),
                               lres.sup_interior, lres.l1_interior);
        std::cout << base << ": residual sup = " << lres.sup_interior
                  << (lim.stabilized ? "" : " (limit not stabilized)") << "\n";
        if (merged.c) break;
    }
    std::cout << "artifacts: " << dir.string() << "\n";
    return 0;
}

int cmd_control(const CommonFlags& flags, double start_x, const std::filesystem::path& root) {
    RunConfig cfg = build_config(flags);
    ensure_arg(!cfg.id.empty(), "control: experiment id required");
    const ExperimentSpec* spec = find_experiment(cfg.id);
    ensure_arg(spec != nullptr, "unknown experiment id '" + cfg.id + "'");
    RunConfig merged = merge_configs(spec->defaults, cfg);

    auto dir = root / (cfg.id + "-control");
    std::filesystem::create_directories(dir);

    std::function<double(double)> u0_fn;
    if (cfg.id == "ex-5-3")
        u0_fn = [](double x) { return 0.5 * x * x + std::sin(x); };
    else
        u0_fn = [](double x) { return 0.5 * x * std::abs(x); };

    Grid grid = make_uniform_grid(*merged.x_min, *merged.x_max,
                                  static_cast<int>(std::llround((*merged.x_max - *merged.x_min) /
                                                                *merged.dx)) +
                                      1);
    ControlProblem cp;
    cp.speed = [](double) { return 1.0; };
    cp.running_cost = [](double x) { return 1.0 + std::abs(x); };
    cp.terminal_cost = u0_fn;
    cp.horizon = std::min(*merged.horizon, 6.0);

    TimeStepping ts = plan_time_steps(cp.horizon, grid.dx, merged.cfl.value_or(0.9), 1.0);
    SnapshotHistory dp = value_function_dp(cp, grid, ts.dt, 0);
    Trajectory traj = synthesize_trajectory(dp, cp, start_x);
    write_trajectory_csv(traj, dir / "trajectory.csv");
    write_field_csv(dp.final_field(), dir / "value_final.csv");

    double v = interp_linear(dp.final_field(), start_x);
    std::cout << "value V(x=" << start_x << ", t=" << cp.horizon << ") = " << v << "\n"
              << "synthesized cost = " << traj.cost << " (gap " << std::abs(traj.cost - v)
              << ")\n"
              << "artifacts: " << dir.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D Eikonal-type Hamilton-Jacobi laboratory"};
    app.require_subcommand(1);

    std::string artifact_root = default_artifact_root().string();
    app.add_option("--artifacts", artifact_root,
                   "artifact root directory (env HJLAB_ARTIFACTS, default ./artifacts)");

    std::string list_tag;
    bool list_empty = false;
    auto* list = app.add_subcommand("list", "list registered experiments");
    list->add_option("--tag", list_tag, "filter by tag");
    list->add_flag("--empty-registry", list_empty, "show an empty registry (degenerate case)");

    CommonFlags run_flags;
    auto* run = app.add_subcommand("run", "run one experiment");
    run->add_option("id", run_flags.id, "experiment id");
    add_override_flags(run, run_flags);

    CommonFlags all_flags;
    std::string all_tag;
    auto* run_all = app.add_subcommand("run-all", "run every registered experiment");
    run_all->add_option("--tag", all_tag, "restrict to a tag");
    add_override_flags(run_all, all_flags);

    CommonFlags audit_flags;
    auto* audit = app.add_subcommand("audit", "audit the Hamiltonian of an experiment");
    audit->add_option("id", audit_flags.id, "experiment id");
    add_override_flags(audit, audit_flags);

    CommonFlags ergodic_flags;
    auto* ergodic = app.add_subcommand("ergodic", "stationary constructions for an experiment");
    ergodic->add_option("id", ergodic_flags.id, "experiment id");
    add_override_flags(ergodic, ergodic_flags);

    CommonFlags control_flags;
    double control_x = 1.0;
    auto* control = app.add_subcommand("control", "value function and trajectory synthesis");
    control->add_option("id", control_flags.id, "experiment id");
    control->add_option("--x", control_x, "synthesis start point");
    add_override_flags(control, control_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) return cmd_list(list_tag, list_empty);
        std::filesystem::path root = artifact_root;
        if (*run) return cmd_run(run_flags, root);
        if (*run_all) return cmd_run_all(all_flags, all_tag, root);
        if (*audit) return cmd_audit(audit_flags);
        if (*ergodic) return cmd_ergodic(ergodic_flags, root);
        if (*control) return cmd_control(control_flags, control_x, root);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
