#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pomega/filters.hpp"
#include "pomega/grid.hpp"
#include "pomega/parametric.hpp"
#include "pomega/sampling.hpp"
#include "pomega/trapped_ion.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;
using pomega::numerics::cd;

struct CommandResult {
    std::vector<std::string> outputs;
    json parameters;
    std::uint64_t seed = 0;
};

std::string manifest_path(const std::string& out) {
    std::string stem = out;
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv")
        stem.resize(stem.size() - 4);
    return stem + ".manifest.json";
}

void write_manifest(const std::string& command,
                    const std::vector<std::string>& argv,
                    const CommandResult& result, double duration_seconds,
                    const std::string& path) {
    json manifest;
    manifest["command"] = command;
    manifest["argv"] = argv;
    manifest["parameters"] = result.parameters;
    manifest["seed"] = result.seed;
    manifest["version"] = kVersion;
    manifest["outputs"] = result.outputs;
    manifest["duration_seconds"] = duration_seconds;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << manifest.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string format_tau(double tau) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", tau);
    return buf;
}

struct FilterDemoOpts {
    double w = 1.0;
    int m = 2;
    int grid = 201;
    std::string out = "filter_demo.csv";
};

CommandResult run_filter_demo(const FilterDemoOpts& opt) {
    pomega::grid::PhaseSpaceGrid g;
    g.axes = {{"re_beta", -opt.w, opt.w, opt.grid}};
    for (double x : pomega::grid::linspace(g.axes[0]))
        g.values.push_back(pomega::filters::tri(x / opt.w) *
                           std::exp(std::pow(std::abs(x), opt.m)));
    pomega::grid::write_grid_csv(g, opt.out, "bounded_product");

    CommandResult result;
    result.outputs = {opt.out};
    result.parameters = {{"w", opt.w}, {"m", opt.m}, {"grid", opt.grid},
                         {"out", opt.out}};
    return result;
}

struct ParametricSingleOpts {
    double r = 10.0 / M_PI;
    std::vector<double> taus = {0.0, 0.2, 0.4, 0.6};
    double w = 2.3;
    int grid = 201;
    double alpha_max = 3.0;
    std::string out = "parametric_single";
};

CommandResult run_parametric_single(const ParametricSingleOpts& opt) {
    pomega::parametric::ParametricParams params;
    params.kappa = 1.0;
    params.delta = opt.r;

    CommandResult result;
    for (double tau : opt.taus) {
        pomega::grid::PhaseSpaceGrid g;
        g.axes = {{"re_alpha", -opt.alpha_max, opt.alpha_max, opt.grid}};
        for (double x : pomega::grid::linspace(g.axes[0]))
            g.values.push_back(pomega::parametric::p_omega_single(
                params, tau, cd(x, 0.0), opt.w));
        const std::string path =
            opt.out + "_tau" + format_tau(tau) + ".csv";
        pomega::grid::write_grid_csv(g, path, "p_omega");
        result.outputs.push_back(path);
    }
    result.parameters = {{"r", opt.r},       {"tau", opt.taus},
                         {"w", opt.w},       {"grid", opt.grid},
                         {"alpha_max", opt.alpha_max}, {"out", opt.out}};
    return result;
}

struct ParametricTwoTimeOpts {
    double r = 10.0 / M_PI;
    double tau1 = 0.1;
    double tau2 = 0.45;
    double w = 2.9;
    int grid = 201;
    double alpha_max = 3.0;
    std::string out = "parametric_two_time.csv";
};

CommandResult run_parametric_two_time(const ParametricTwoTimeOpts& opt) {
    pomega::parametric::ParametricParams params;
    params.kappa = 1.0;
    params.delta = opt.r;

    pomega::grid::PhaseSpaceGrid g;
    g.axes = {{"re_alpha1", -opt.alpha_max, opt.alpha_max, opt.grid},
              {"re_alpha2", -opt.alpha_max, opt.alpha_max, opt.grid}};
    const std::vector<double> xs = pomega::grid::linspace(g.axes[0]);
    for (double x1 : xs)
        for (double x2 : xs)
            g.values.push_back(pomega::parametric::p_omega_two_time(
                params, opt.tau1, opt.tau2, cd(x1, 0.0), cd(x2, 0.0),
                opt.w));
    pomega::grid::write_grid_csv(g, opt.out, "p_omega");

    CommandResult result;
    result.outputs = {opt.out};
    result.parameters = {{"r", opt.r},       {"tau1", opt.tau1},
                         {"tau2", opt.tau2}, {"w", opt.w},
                         {"grid", opt.grid}, {"alpha_max", opt.alpha_max},
                         {"out", opt.out}};
    return result;
}

struct IonScanOpts {
    int p = 3;
    double eta = 1.0;
    double beta_mod = 1.3;
    int cutoff = 200;
    int grid = 200;
    std::string out = "ion_scan.csv";
};

CommandResult run_ion_scan(const IonScanOpts& opt) {
    pomega::ion::IonParams params;
    params.eta = opt.eta;
    params.cutoff = opt.cutoff;

    const int n = opt.grid;
    pomega::grid::PhaseSpaceGrid g;
    // phi covers [0, 2pi) excluding the duplicate endpoint; tau covers (0, 2].
    g.axes = {{"phi", 0.0, 2.0 * M_PI * (n - 1) / n, n},
              {"tau", 2.0 / n, 2.0, n}};
    Eigen::VectorXd phis =
        Eigen::Map<const Eigen::VectorXd>(
            pomega::grid::linspace(g.axes[0]).data(), n);
    Eigen::VectorXd taus =
        Eigen::Map<const Eigen::VectorXd>(
            pomega::grid::linspace(g.axes[1]).data(), n);
    const Eigen::MatrixXd scan = pomega::ion::scan_delta_phi(
        params, opt.p, opt.beta_mod, phis, taus);
    g.values.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g.values[static_cast<std::size_t>(i) * n + j] = scan(i, j);
    pomega::grid::write_grid_csv(g, opt.out, "delta_phi");

    CommandResult result;
    result.outputs = {opt.out};
    result.parameters = {{"p", opt.p},          {"eta", opt.eta},
                         {"beta_mod", opt.beta_mod}, {"cutoff", opt.cutoff},
                         {"grid", opt.grid},    {"out", opt.out}};
    return result;
}

struct SampleOpts {
    double r = 10.0 / M_PI;
    double tau1 = 0.1;
    double tau2 = 0.45;
    double eta_det = 0.9;
    double eta_det2 = 0.9;
    double R = 1.0;
    std::int64_t M = 100000;
    std::uint64_t seed = 42;
    std::string out = "samples";
};

pomega::sampling::DetectionConfig detection_from(const SampleOpts& opt) {
    pomega::sampling::DetectionConfig cfg;
    cfg.eta = opt.eta_det;
    cfg.eta_prime = opt.eta_det2;
    cfg.R = opt.R;
    cfg.t = M_PI * opt.tau1 / 2.0;
    cfg.dt = M_PI * (opt.tau2 - opt.tau1) / 2.0;
    return cfg;
}

CommandResult run_sample(const SampleOpts& opt) {
    if (opt.tau2 < opt.tau1)
        throw CLI::ValidationError("--tau2 must be >= --tau1");
    pomega::parametric::ParametricParams params;
    params.kappa = 1.0;
    params.delta = opt.r;

    const pomega::sampling::SampleSet set = pomega::sampling::generate_samples(
        params, detection_from(opt), opt.M, opt.seed);
    const std::string csv = opt.out + ".csv";
    const std::string meta = opt.out + ".meta";
    pomega::sampling::write_samples(set, csv, meta);

    CommandResult result;
    result.outputs = {csv, meta};
    result.seed = opt.seed;
    result.parameters = {{"r", opt.r},
                         {"tau1", opt.tau1},
                         {"tau2", opt.tau2},
                         {"eta_det", opt.eta_det},
                         {"eta_det2", opt.eta_det2},
                         {"R", opt.R},
                         {"M", opt.M},
                         {"seed", opt.seed},
                         {"out", opt.out}};
    return result;
}

struct ReconstructOpts {
    std::string in = "samples";
    double w = 2.9;
    int grid = 5;
    double alpha_max = 2.0;
    std::string out = "reconstruction.csv";
};

CommandResult run_reconstruct(const ReconstructOpts& opt) {
    const pomega::sampling::SampleSet set =
        pomega::sampling::read_samples(opt.in + ".csv", opt.in + ".meta");

    std::ofstream out(opt.out);
    if (!out) throw std::runtime_error("cannot open " + opt.out);
    out << "re_alpha1,re_alpha2,estimate,std_error\n";
    pomega::grid::AxisSpec axis{"re_alpha", -opt.alpha_max, opt.alpha_max,
                                opt.grid};
    char buf[160];
    for (double a1 : pomega::grid::linspace(axis))
        for (double a2 : pomega::grid::linspace(axis)) {
            const pomega::sampling::Reconstruction rec =
                pomega::sampling::reconstruct(set, cd(a1, 0.0), cd(a2, 0.0),
                                              opt.w);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", a1,
                          a2, rec.estimate, rec.std_error);
            out << buf;
        }
    if (!out) throw std::runtime_error("write failed: " + opt.out);

    CommandResult result;
    result.outputs = {opt.out};
    result.seed = set.seed;
    result.parameters = {{"in", opt.in},
                         {"w", opt.w},
                         {"grid", opt.grid},
                         {"alpha_max", opt.alpha_max},
                         {"out", opt.out}};
    return result;
}

int dispatch(const std::vector<std::string>& args);

int run_rerun(const std::string& manifest_file) {
    std::ifstream in(manifest_file);
    if (!in) throw std::runtime_error("cannot open " + manifest_file);
    json manifest;
    in >> manifest;
    const std::vector<std::string> argv =
        manifest.at("argv").get<std::vector<std::string>>();
    return dispatch(argv);
}

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"Filtered phase-space quasiprobabilities for two-time "
                 "quantum correlations"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    FilterDemoOpts fd;
    CLI::App* filter_demo = app.add_subcommand(
        "filter-demo", "Bounded filter-times-growth profile");
    filter_demo->add_option("--w", fd.w, "filter width")
        ->check(CLI::PositiveNumber)->capture_default_str();
    filter_demo->add_option("--m", fd.m, "growth exponent")
        ->check(CLI::IsMember({2, 4, 6}))->capture_default_str();
    filter_demo->add_option("--grid", fd.grid, "grid points")
        ->check(CLI::Range(2, 1000000))->capture_default_str();
    filter_demo->add_option("--out", fd.out, "output CSV")
        ->capture_default_str();

    ParametricSingleOpts ps;
    CLI::App* parametric_single = app.add_subcommand(
        "parametric-single", "Single-time quasiprobability cross sections");
    parametric_single->add_option("--r", ps.r, "mismatch ratio delta/kappa")
        ->capture_default_str();
    parametric_single->add_option("--tau", ps.taus, "times (repeatable)")
        ->expected(-1)->capture_default_str();
    parametric_single->add_option("--w", ps.w, "filter width")
        ->check(CLI::PositiveNumber)->capture_default_str();
    parametric_single->add_option("--grid", ps.grid, "grid points")
        ->check(CLI::Range(2, 1000000))->capture_default_str();
    parametric_single->add_option("--alpha-max", ps.alpha_max,
                                  "half-width of the Re alpha axis")
        ->check(CLI::PositiveNumber)->capture_default_str();
    parametric_single->add_option("--out", ps.out, "output prefix")
        ->capture_default_str();

    ParametricTwoTimeOpts pt;
    CLI::App* parametric_two_time = app.add_subcommand(
        "parametric-two-time", "Two-time quasiprobability surface");
    parametric_two_time->add_option("--r", pt.r, "mismatch ratio delta/kappa")
        ->capture_default_str();
    parametric_two_time->add_option("--tau1", pt.tau1, "first time")
        ->capture_default_str();
    parametric_two_time->add_option("--tau2", pt.tau2, "second time")
        ->capture_default_str();
    parametric_two_time->add_option("--w", pt.w, "filter width")
        ->check(CLI::PositiveNumber)->capture_default_str();
    parametric_two_time->add_option("--grid", pt.grid, "grid points per axis")
        ->check(CLI::Range(2, 100000))->capture_default_str();
    parametric_two_time->add_option("--alpha-max", pt.alpha_max,
                                    "half-width of each Re alpha axis")
        ->check(CLI::PositiveNumber)->capture_default_str();
    parametric_two_time->add_option("--out", pt.out, "output CSV")
        ->capture_default_str();

    IonScanOpts is;
    CLI::App* ion_scan = app.add_subcommand(
        "ion-scan", "Gaussian-bound excess over a (phi, tau) grid");
    ion_scan->add_option("--p", is.p, "Fock input state")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    ion_scan->add_option("--eta", is.eta, "Lamb-Dicke parameter")
        ->check(CLI::PositiveNumber)->capture_default_str();
    ion_scan->add_option("--beta-mod", is.beta_mod, "common |beta|")
        ->check(CLI::PositiveNumber)->capture_default_str();
    ion_scan->add_option("--cutoff", is.cutoff, "Fock-space dimension")
        ->check(CLI::Range(8, 100000))->capture_default_str();
    ion_scan->add_option("--grid", is.grid, "grid points per axis")
        ->check(CLI::Range(2, 100000))->capture_default_str();
    ion_scan->add_option("--out", is.out, "output CSV")
        ->capture_default_str();

    SampleOpts so;
    CLI::App* sample = app.add_subcommand(
        "sample", "Synthetic correlated homodyne difference events");
    sample->add_option("--r", so.r, "mismatch ratio delta/kappa")
        ->capture_default_str();
    sample->add_option("--tau1", so.tau1, "first time")
        ->capture_default_str();
    sample->add_option("--tau2", so.tau2, "second time")
        ->capture_default_str();
    sample->add_option("--eta-det", so.eta_det, "detector efficiency")
        ->check(CLI::Range(1e-12, 1.0))->capture_default_str();
    sample->add_option("--eta-det2", so.eta_det2,
                       "detector efficiency, second channel")
        ->check(CLI::Range(1e-12, 1.0))->capture_default_str();
    sample->add_option("--R", so.R, "local-oscillator amplitude")
        ->check(CLI::PositiveNumber)->capture_default_str();
    sample->add_option("--M", so.M, "number of events")
        ->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40))
        ->capture_default_str();
    sample->add_option("--seed", so.seed, "RNG seed")->capture_default_str();
    sample->add_option("--out", so.out, "output prefix")
        ->capture_default_str();

    ReconstructOpts ro;
    CLI::App* reconstruct = app.add_subcommand(
        "reconstruct", "Pattern-function estimate over an alpha grid");
    reconstruct->add_option("--in", ro.in, "sample file prefix")
        ->capture_default_str();
    reconstruct->add_option("--w", ro.w, "filter width")
        ->check(CLI::PositiveNumber)->capture_default_str();
    reconstruct->add_option("--grid", ro.grid, "grid points per axis")
        ->check(CLI::Range(2, 10000))->capture_default_str();
    reconstruct->add_option("--alpha-max", ro.alpha_max,
                            "half-width of each Re alpha axis")
        ->check(CLI::PositiveNumber)->capture_default_str();
    reconstruct->add_option("--out", ro.out, "output CSV")
        ->capture_default_str();

    std::string manifest_file;
    CLI::App* rerun = app.add_subcommand(
        "rerun", "Re-execute a command from its manifest");
    rerun->add_option("manifest", manifest_file, "manifest JSON path")
        ->required()->check(CLI::ExistingFile);

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the message; exit code contract is ours
        return 2;
    }

    if (rerun->parsed()) return run_rerun(manifest_file);

    const auto started = std::chrono::steady_clock::now();
    CommandResult result;
    std::string name;
    std::string out;
    if (filter_demo->parsed()) {
        name = "filter-demo";
        result = run_filter_demo(fd);
        out = fd.out;
    } else if (parametric_single->parsed()) {
        name = "parametric-single";
        result = run_parametric_single(ps);
        out = ps.out;
    } else if (parametric_two_time->parsed()) {
        name = "parametric-two-time";
        result = run_parametric_two_time(pt);
        out = pt.out;
    } else if (ion_scan->parsed()) {
        name = "ion-scan";
        result = run_ion_scan(is);
        out = is.out;
    } else if (sample->parsed()) {
        name = "sample";
        result = run_sample(so);
        out = so.out;
    } else {
        name = "reconstruct";
        result = run_reconstruct(ro);
        out = ro.out;
    }
    const double duration =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      started)
            .count();
    write_manifest(name, args, result, duration, manifest_path(out));
    for (const std::string& path : result.outputs)
        std::cout << path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return dispatch(args);
    } catch (const pomega::numerics::NotPSD& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 1;
    } catch (const pomega::numerics::NonConvergence& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 1;
    } catch (const pomega::parametric::TimeOrderViolation& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
