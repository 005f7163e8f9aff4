// Command-line front end: simulate paths, run the break tests on increment
// data, estimate the break location, and drive the simulation studies.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "jumpbreak/montecarlo.hpp"

namespace {

using namespace jumpbreak;

// All file output goes through a temp file plus rename so readers never see
// partial content.
void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << content;
        if (!out) throw std::runtime_error("write to " + tmp + " failed");
    }
    std::filesystem::rename(tmp, path);
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-")
        std::cout << content;
    else
        write_text_atomic(out_path, content);
}

const char* const kVersion = "0.1.0";

std::chrono::steady_clock::time_point run_started;

// The manifest records how an output file was produced. Everything in it is
// reproducible from the params except wall_clock_seconds.
void emit_manifest(const std::string& out_path, const std::string& subcommand,
                   nlohmann::json params) {
    if (out_path.empty() || out_path == "-") return;
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      run_started)
            .count();
    nlohmann::json manifest{
        {"tool", "jumpbreak"},
        {"version", kVersion},
        {"subcommand", subcommand},
        {"params", std::move(params)},
        {"output", out_path},
        {"wall_clock_seconds", elapsed},
    };
    write_text_atomic(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

struct InputOpts {
    std::string increments_path;
    std::string prices_path;
};

void add_input_opts(CLI::App* cmd, InputOpts& opts) {
    auto* in = cmd->add_option("--in", opts.increments_path,
                               "increment CSV (j,increment with # delta_n=...)");
    auto* prices =
        cmd->add_option("--from-prices", opts.prices_path,
                        "price CSV (t,price at equidistant times)");
    in->excludes(prices);
}

IncrementSeries load_series(const InputOpts& opts) {
    if (!opts.increments_path.empty())
        return read_increments_csv_file(opts.increments_path);
    if (!opts.prices_path.empty()) {
        std::ifstream in(opts.prices_path);
        if (!in)
            throw std::runtime_error("cannot open " + opts.prices_path);
        return read_prices_csv(in);
    }
    throw std::runtime_error("no input: pass --in or --from-prices");
}

struct GridOpts {
    std::string preset = "pure-jump";
    bool coarse = false;
    std::string grid_file;
};

void add_grid_opts(CLI::App* cmd, GridOpts& opts) {
    cmd->add_option("--grid-preset", opts.preset, "pure-jump or brownian")
        ->check(CLI::IsMember({"pure-jump", "brownian"}));
    cmd->add_flag("--coarse", opts.coarse, "20-point grid instead of the fine one");
    cmd->add_option("--grid-file", opts.grid_file,
                    "explicit grid, one level per line");
}

ZGrid make_grid(const GridOpts& opts, double delta_n) {
    if (!opts.grid_file.empty()) return ZGrid::from_file(opts.grid_file);
    if (opts.preset == "brownian")
        return opts.coarse ? ZGrid::brownian_coarse(delta_n)
                           : ZGrid::brownian_fine(delta_n);
    return opts.coarse ? ZGrid::pure_jump_coarse() : ZGrid::pure_jump_fine();
}

int run_simulate(const CLI::App& cmd, std::size_t n, double kn, double dninv,
                 double drift, double sigma, double beta, double beta2,
                 double theta0, const std::string& sampler, double eps_sim,
                 bool no_compensate, std::uint64_t seed,
                 const std::string& out) {
    const double delta_n = 1.0 / dninv;
    if (n == 0) {
        if (!(kn > 0.0))
            throw std::runtime_error("pass --n or --kn to size the sample");
        n = static_cast<std::size_t>(std::llround(kn * dninv));
    }
    ProcessSpec spec;
    spec.drift = drift;
    spec.sigma = sigma;
    spec.jump_pre = JumpModel::beta_family(beta);
    if (cmd.count("--beta2") > 0) {
        spec.jump_post = JumpModel::beta_family(beta2);
        spec.theta0 = theta0;
    }
    SamplerConfig cfg;
    cfg.method = parse_jump_sampler(sampler);
    cfg.eps_sim = eps_sim;
    cfg.compensate_small = !no_compensate;
    cfg.seed = seed;
    const auto series = simulate_path(spec, n, delta_n, cfg);
    std::ostringstream body;
    write_increments_csv(series, body, seed);
    emit(out, body.str());
    emit_manifest(out, "simulate",
                  {{"n", n},
                   {"delta_n", delta_n},
                   {"drift", drift},
                   {"sigma", sigma},
                   {"beta", beta},
                   {"beta2", cmd.count("--beta2") > 0 ? nlohmann::json(beta2)
                                                      : nlohmann::json()},
                   {"theta0", theta0},
                   {"sampler", sampler},
                   {"eps_sim", eps_sim},
                   {"compensate_small", !no_compensate},
                   {"seed", seed}});
    return 0;
}

int run_test(const InputOpts& input, const GridOpts& grid_opts,
             const std::string& method_name, double z0, double alpha,
             std::size_t replicates, const std::string& law, bool observed,
             std::uint64_t seed, const std::string& draws_out,
             const std::string& out) {
    const auto series = load_series(input);
    const auto method = parse_test_method(method_name);
    BootstrapConfig bc;
    bc.replicates = replicates;
    bc.law = parse_multiplier_law(law);
    bc.seed = seed;
    TestOutcome outcome;
    switch (method) {
        case TestMethod::kscp1:
            if (!(z0 > 0.0)) throw std::runtime_error("kscp1 needs --z0");
            outcome = kscp_test1(series, z0, alpha);
            break;
        case TestMethod::kscp2:
            if (!(z0 > 0.0)) throw std::runtime_error("kscp2 needs --z0");
            outcome = kscp_test2(series, z0, alpha, bc);
            break;
        case TestMethod::cp:
            outcome = cp_test(series, make_grid(grid_opts, series.delta_n),
                              alpha, bc,
                              observed ? ZSupMode::observed : ZSupMode::grid);
            break;
    }
    if (!draws_out.empty()) {
        if (method == TestMethod::kscp1)
            throw std::runtime_error("kscp1 has no bootstrap draws to export");
        if (observed)
            throw std::runtime_error(
                "--draws-out is not supported with --observed");
        const auto draws =
            method == TestMethod::kscp2
                ? bootstrap_sup_samples(series, z0, bc)
                : bootstrap_sup_samples(
                      series, make_grid(grid_opts, series.delta_n), bc);
        std::ostringstream body;
        write_bootstrap_csv(draws, body);
        write_text_atomic(draws_out, body.str());
    }
    emit(out, to_json(outcome).dump(2) + "\n");
    emit_manifest(out, "test",
                  {{"method", method_name},
                   {"z0", z0},
                   {"alpha", alpha},
                   {"B", replicates},
                   {"law", law},
                   {"observed", observed},
                   {"seed", seed}});
    return 0;
}

int run_estimate(const InputOpts& input, const GridOpts& grid_opts, double z0,
                 bool observed, const std::string& out) {
    const auto series = load_series(input);
    ChangePointEstimate est;
    std::string mode;
    if (z0 > 0.0) {
        est = estimate_changepoint(series, z0);
        mode = "point";
    } else {
        est = estimate_changepoint(series, make_grid(grid_opts, series.delta_n),
                                   observed ? ZSupMode::observed
                                            : ZSupMode::grid);
        mode = "grid";
    }
    emit(out, to_json(est).dump(2) + "\n");
    emit_manifest(out, "estimate",
                  {{"z0", z0}, {"observed", observed}, {"mode", mode}});
    return 0;
}

int run_mc(const std::string& config_path, const std::string& task, double z0,
           bool centered, std::size_t smalltime_reps, double smalltime_z,
           int tmin_pow, int tmax_pow, bool full, bool dry_run,
           const std::string& out) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open " + config_path);
    nlohmann::json j;
    in >> j;
    auto config = experiment_config_from_json(j);
    if (full) {
        config.replicates = 1000;
        config.bootstrap.replicates = 250;
        config.coarse_grid = false;
    }
    if (dry_run) {
        emit(out, to_json(config).dump(2) + "\n");
        return 0;
    }
    std::ostringstream body;
    if (task == "rates") {
        write_csv(run_experiment(config), body);
    } else if (task == "estimator") {
        double level = z0;
        if (!(level > 0.0)) {
            if (config.z0_levels.empty())
                throw std::runtime_error("estimator task needs --z0");
            level = config.z0_levels.front();
        }
        write_csv(run_estimator_study(config, level), body);
    } else if (task == "covariance") {
        const std::vector<std::array<double, 4>> pairs{
            {0.25, 0.5, 0.25, 0.5},
            {0.25, 0.5, 0.75, 1.0},
            {0.5, 1.0, 0.5, 1.0},
            {0.3, 0.7, 0.6, 0.7},
        };
        const auto checks =
            validate_covariance(config, pairs, config.replicates, centered);
        nlohmann::json report{{"centered", centered},
                              {"paths", config.replicates},
                              {"checks", nlohmann::json::array()}};
        for (const auto& c : checks)
            report["checks"].push_back({{"theta1", c.theta1},
                                        {"z1", c.z1},
                                        {"theta2", c.theta2},
                                        {"z2", c.z2},
                                        {"limit", c.limit},
                                        {"estimate", c.estimate},
                                        {"se", c.se},
                                        {"zscore", c.zscore()}});
        body << report.dump(2) << '\n';
    } else if (task == "smalltime") {
        if (tmin_pow > tmax_pow)
            throw std::runtime_error("--tmin-pow must not exceed --tmax-pow");
        std::vector<double> times;
        for (int p = tmax_pow; p >= tmin_pow; --p)
            times.push_back(std::ldexp(1.0, -p));
        const auto study = small_time_study(config.process(), smalltime_z,
                                            times, smalltime_reps, config.seed);
        nlohmann::json report{{"z", study.z},
                              {"slope", study.slope},
                              {"slope_se", study.slope_se},
                              {"replicates", smalltime_reps},
                              {"rows", nlohmann::json::array()}};
        for (std::size_t i = 0; i < study.times.size(); ++i)
            report["rows"].push_back({{"t", study.times[i]},
                                      {"p_hat", study.p_hat[i]},
                                      {"se", study.se[i]},
                                      {"remainder", study.remainder[i]}});
        body << report.dump(2) << '\n';
    } else {
        throw std::runtime_error("unknown task: " + task);
    }
    emit(out, body.str());
    emit_manifest(out, "mc",
                  {{"config", config_path},
                   {"task", task},
                   {"z0", z0},
                   {"centered", centered},
                   {"full", full},
                   {"seed", config.seed}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Nonparametric break tests for the jump tail of a semimartingale "
        "observed at high frequency"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "simulate an increment series");
    std::size_t sim_n = 0;
    double sim_kn = 0.0, sim_dninv = 0.0, sim_drift = 0.0, sim_sigma = 0.0;
    double sim_beta = 1.0, sim_beta2 = 1.0, sim_theta0 = 0.5, sim_eps = 1e-4;
    std::string sim_sampler = "truncated-cp", sim_out;
    bool sim_no_comp = false;
    std::uint64_t sim_seed = 0;
    sim->add_option("--n", sim_n, "number of increments");
    sim->add_option("--kn", sim_kn, "horizon n delta_n; n = kn * dninv");
    sim->add_option("--dninv", sim_dninv, "1/delta_n")->required()
        ->check(CLI::PositiveNumber);
    sim->add_option("--b", sim_drift, "drift");
    sim->add_option("--sigma", sim_sigma, "Brownian coefficient")
        ->check(CLI::NonNegativeNumber);
    sim->add_option("--beta", sim_beta, "jump tail scale")->
        check(CLI::PositiveNumber);
    sim->add_option("--beta2", sim_beta2, "post-break tail scale");
    sim->add_option("--theta0", sim_theta0, "break fraction in (0,1)");
    sim->add_option("--sampler", sim_sampler, "truncated-cp or exact-stable")
        ->check(CLI::IsMember({"truncated-cp", "exact-stable"}));
    sim->add_option("--eps-sim", sim_eps, "truncation level for truncated-cp")
        ->check(CLI::PositiveNumber);
    sim->add_flag("--no-compensate", sim_no_comp,
                  "drop the small-jump mean correction");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--out", sim_out, "output CSV path (default stdout)");

    auto* tst = app.add_subcommand("test", "run a break test on increments");
    InputOpts tst_in;
    GridOpts tst_grid;
    std::string tst_method, tst_law = "gaussian", tst_out, tst_draws;
    double tst_z0 = 0.0, tst_alpha = 0.05;
    std::size_t tst_B = 250;
    bool tst_observed = false;
    std::uint64_t tst_seed = 0;
    add_input_opts(tst, tst_in);
    add_grid_opts(tst, tst_grid);
    tst->add_option("--method", tst_method, "kscp1, kscp2 or cp")->required()
        ->check(CLI::IsMember({"kscp1", "kscp2", "cp"}));
    tst->add_option("--z0", tst_z0, "tail level for kscp1/kscp2");
    tst->add_option("--alpha", tst_alpha, "test level");
    tst->add_option("--B", tst_B, "bootstrap replicates");
    tst->add_option("--law", tst_law, "gaussian or rademacher")
        ->check(CLI::IsMember({"gaussian", "rademacher"}));
    tst->add_flag("--observed", tst_observed,
                  "take the z supremum over observed values (cp only)");
    tst->add_option("--seed", tst_seed, "bootstrap seed");
    tst->add_option("--draws-out", tst_draws,
                    "also write the bootstrap draws as b,value CSV");
    tst->add_option("--out", tst_out, "output JSON path (default stdout)");

    auto* est = app.add_subcommand("estimate", "locate the break");
    InputOpts est_in;
    GridOpts est_grid;
    double est_z0 = 0.0;
    bool est_observed = false;
    std::string est_out;
    add_input_opts(est, est_in);
    add_grid_opts(est, est_grid);
    est->add_option("--z0", est_z0, "single tail level (otherwise grid mode)");
    est->add_flag("--observed", est_observed,
                  "take the z supremum over observed values");
    est->add_option("--out", est_out, "output JSON path (default stdout)");

    auto* mc = app.add_subcommand("mc", "simulation studies from a JSON config");
    std::string mc_config, mc_task, mc_out;
    double mc_z0 = 0.0, mc_z = 0.25;
    bool mc_centered = false, mc_dry = false;
    std::size_t mc_reps = 200000;
    int mc_tmin = 4, mc_tmax = 10;
    mc->add_option("--config", mc_config, "ExperimentConfig JSON")->required();
    mc->add_option("--task", mc_task, "rates, estimator, covariance, smalltime")
        ->required()
        ->check(CLI::IsMember({"rates", "estimator", "covariance", "smalltime"}));
    mc->add_option("--z0", mc_z0, "estimator task: tail level");
    mc->add_flag("--centered", mc_centered,
                 "covariance task: check the tail-comparison process");
    mc->add_option("--reps", mc_reps, "smalltime task: replicates per horizon");
    mc->add_option("--z", mc_z, "smalltime task: tail level");
    mc->add_option("--tmin-pow", mc_tmin, "smalltime: smallest horizon 2^-p");
    mc->add_option("--tmax-pow", mc_tmax, "smalltime: largest horizon 2^-p");
    bool mc_full = false;
    mc->add_flag("--full", mc_full,
                 "published scale: 1000 replicates, B=250, fine grid");
    mc->add_flag("--dry-run", mc_dry, "echo the parsed config and exit");
    mc->add_option("--out", mc_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    run_started = std::chrono::steady_clock::now();
    try {
        if (sim->parsed())
            return run_simulate(*sim, sim_n, sim_kn, sim_dninv, sim_drift,
                                sim_sigma, sim_beta, sim_beta2, sim_theta0,
                                sim_sampler, sim_eps, sim_no_comp, sim_seed,
                                sim_out);
        if (tst->parsed())
            return run_test(tst_in, tst_grid, tst_method, tst_z0, tst_alpha,
                            tst_B, tst_law, tst_observed, tst_seed, tst_draws,
                            tst_out);
        if (est->parsed())
            return run_estimate(est_in, est_grid, est_z0, est_observed, est_out);
        if (mc->parsed())
            return run_mc(mc_config, mc_task, mc_z0, mc_centered, mc_reps, mc_z,
                          mc_tmin, mc_tmax, mc_full, mc_dry, mc_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
