// zlab command-line front end.  Exit codes: 0 all enabled audits pass,
// 1 an audit failed, 2 usage or configuration error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "zlab/experiments.hpp"
#include "zlab/functionals.hpp"
#include "zlab/ground_state.hpp"
#include "zlab/normal_form.hpp"
#include "zlab/variational.hpp"
#include "zlab/version.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_audit = 1;
constexpr int exit_usage = 2;

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
        if (pos != item.size() || !std::isfinite(v)) throw zlab::ConfigError("--values", "bad entry '" + item + "'");
        out.push_back(v);
    }
    return out;
}

zlab::ScenarioConfig config_with_output(const std::string& path, const std::string& out) {
    auto cfg = zlab::load_config(path);
    if (!out.empty()) cfg.output_dir = out;
    return cfg;
}

void report(const zlab::RunArtifacts& art) {
    std::cout << "output: " << art.output_dir.string() << '\n';
    for (const auto& a : art.audits) std::cout << "audit " << a.name << ": " << (a.passed ? "pass" : "FAIL") << '\n';
}

int cmd_run(const std::string& config, const std::string& out) {
    const auto art = zlab::run_scenario(config_with_output(config, out));
    report(art);
    return art.passed() ? exit_ok : exit_audit;
}

int cmd_sweep(const std::string& config, const std::string& out, const std::string& key, const std::string& values,
              int workers) {
    const auto cfg = config_with_output(config, out);
    const auto rows = zlab::sweep(cfg, key, parse_values(values), workers);
    const auto table = zlab::sweep_table_csv(rows, key);
    const auto dir = zlab::resolve_output_dir(cfg);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "sweep.csv") << table;
    std::cout << table;
    bool ok = true;
    for (const auto& r : rows) ok = ok && r.passed;
    return ok ? exit_ok : exit_audit;
}

int cmd_ground_state(std::size_t n, double r_max) {
    const auto gs = zlab::solve_ground_state(zlab::make_grid(n, r_max));
    const auto tc = zlab::threshold_constants(gs);
    const double q2 = 2.0 * gs.mass;
    std::printf("Q(0)        %.12g\n", gs.q0);
    std::printf("M(Q)        %.12g\n", tc.m_q);
    std::printf("E_S(Q)      %.12g\n", tc.e_s_q);
    std::printf("J(Q)        %.12g\n", tc.j_q);
    std::printf("threshold   %.12g\n", tc.product);
    std::printf("|grad Q|^2 / |Q|^2   %.9f\n", zlab::gradient_norm_sq(gs.profile) / q2);
    std::printf("|Q|_4^4 / |Q|^2      %.9f\n", zlab::l4_norm4(gs.profile) / q2);
    std::printf("K(Q) / |grad Q|^2    %.3e\n", zlab::k_functional(gs.profile) / zlab::gradient_norm_sq(gs.profile));
    std::printf("J^2/4 - threshold    %.3e\n", tc.j_q * tc.j_q / 4.0 - tc.product);
    return exit_ok;
}

int cmd_audit_virial(const std::string& config, const std::string& out) {
    const auto cfg = config_with_output(config, out);
    if (cfg.monitors_virial.empty()) throw zlab::ConfigError("monitors.virial", "audit-virial needs at least one radius");
    const auto art = zlab::run_scenario(cfg);
    report(art);
    for (const auto& a : art.audits)
        if (a.name == "virial") {
            std::ifstream in(art.output_dir / "audit_virial.json");
            std::cout << in.rdbuf();
            return a.passed ? exit_ok : exit_audit;
        }
    std::cout << "no virial audit for this verdict\n";
    return exit_ok;
}

int cmd_audit_lemma24(long samples, std::uint64_t seed, std::size_t n, double r_max) {
    const auto gs = zlab::solve_ground_state(zlab::make_grid(n, r_max));
    const auto a = zlab::lemma24_audit(gs, samples, seed);
    std::printf("samples %ld (rejected %ld)\n", a.samples, a.rejected);
    std::printf("K >= 0: %ld  min margin %.3e\n", a.k_nonnegative, a.min_margin_nonnegative);
    std::printf("K <  0: %ld  min margin %.3e\n", a.k_negative, a.min_margin_negative);
    std::printf("violations %ld (slack %.1e)\n", a.violations, a.slack);
    std::printf("b(1) - sqrt 6 = %.3e, b(0) - 2 = %.3e\n", zlab::b_function(1.0) - std::sqrt(6.0), zlab::b_function(0.0) - 2.0);
    return a.passed() ? exit_ok : exit_audit;
}

int cmd_audit_normalform(double alpha, double beta, int samples) {
    if (!(alpha > 0.0)) throw zlab::ConfigError("--alpha", "must be positive");
    if (beta <= 0.0) beta = zlab::default_beta(alpha);
    const auto sc = zlab::resonance_scan(beta, alpha, samples);
    std::printf("alpha %g beta %g (minimal %g, admissible %s)\n", alpha, beta, zlab::minimal_beta(alpha),
                sc.beta_admissible ? "yes" : "no");
    std::printf("LL   |omega|/(alpha b)      in [%.4f, %.4f]\n", sc.min_ratio_ll, sc.max_ratio_ll);
    std::printf("XL   |omega|/(b(1+s))       >= %.4f\n", sc.min_ratio_xl);
    std::printf("wave |b^2-a^2-alpha s|/(s(1+s)) >= %.4f\n", sc.min_ratio_wave);
    std::printf("evaluations %ld\n", sc.evaluations);
    const bool ok = sc.min_ratio_ll >= 0.5 && sc.max_ratio_ll <= 2.0 && sc.min_ratio_xl >= 0.5 && sc.min_ratio_wave >= 0.5;
    return ok ? exit_ok : exit_audit;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial Zakharov system lab"};
    app.require_subcommand(1);

    std::string config, out, key, values;
    int workers = 1;
    auto* run = app.add_subcommand("run", "Run one scenario");
    run->add_option("config", config, "Scenario file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "Output directory");

    auto* sw = app.add_subcommand("sweep", "Run a scenario for several values of one numeric key");
    sw->add_option("config", config, "Scenario file")->required()->check(CLI::ExistingFile);
    sw->add_option("--param", key, "Config key to vary")->required();
    sw->add_option("--values", values, "Comma-separated values")->required();
    sw->add_option("--workers", workers, "Parallel runs")->check(CLI::PositiveNumber);
    sw->add_option("--out", out, "Output directory");

    std::size_t n = 2047;
    double r_max = 24.0;
    auto* gs = app.add_subcommand("ground-state", "Solve for Q and print the threshold constants");
    gs->add_option("--n", n, "Interior grid points")->check(CLI::Range(64, 1 << 20));
    gs->add_option("--rmax", r_max, "Box radius")->check(CLI::Range(15.0, 1e4));

    auto* av = app.add_subcommand("audit-virial", "Run a scenario and audit the localized virial slopes");
    av->add_option("config", config, "Scenario file")->required()->check(CLI::ExistingFile);
    av->add_option("--out", out, "Output directory");

    long samples = 10000;
    std::uint64_t seed = 1;
    auto* al = app.add_subcommand("audit-lemma24", "Sampled audit of the sign-dependent variational inequality");
    al->add_option("--samples", samples, "Admissible samples")->check(CLI::PositiveNumber);
    al->add_option("--seed", seed, "Random seed");
    al->add_option("--n", n, "Interior grid points")->check(CLI::Range(64, 1 << 20));
    al->add_option("--rmax", r_max, "Box radius")->check(CLI::Range(15.0, 1e4));

    double alpha = 1.0, beta = 0.0;
    int scan_samples = 24;
    auto* an = app.add_subcommand("audit-normalform", "Resonance scan of the normal-form denominators");
    an->add_option("--alpha", alpha, "Ion sound speed");
    an->add_option("--beta", beta, "Region threshold (default max(10, ceil(5 + |log2 alpha|)))");
    an->add_option("--samples", scan_samples, "Samples per axis")->check(CLI::Range(2, 400));

    auto* ver = app.add_subcommand("version", "Print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code == 0) return exit_ok;
        std::cerr << app.help();
        return exit_usage;
    }

    try {
        if (*run) return cmd_run(config, out);
        if (*sw) return cmd_sweep(config, out, key, values, workers);
        if (*gs) return cmd_ground_state(n, r_max);
        if (*av) return cmd_audit_virial(config, out);
        if (*al) return cmd_audit_lemma24(samples, seed, n, r_max);
        if (*an) return cmd_audit_normalform(alpha, beta, scan_samples);
        if (*ver) {
            std::cout << "zlab " << zlab::version << '\n';
            return exit_ok;
        }
    } catch (const zlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_audit;
    }
    return exit_usage;
}
