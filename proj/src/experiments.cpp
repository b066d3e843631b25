#include "zlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "zlab/diagnostics_norms.hpp"
#include "zlab/evolution.hpp"
#include "zlab/functionals.hpp"
#include "zlab/ground_state.hpp"
#include "zlab/normal_form.hpp"
#include "zlab/variational.hpp"
#include "zlab/virial.hpp"

namespace zlab {

using nlohmann::json;

ConfigError::ConfigError(std::string key, const std::string& what)
    : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key, "not a number: '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError(key, "not a number: '" + v + "'");
    if (!std::isfinite(x)) throw ConfigError(key, "value must be finite");
    return x;
}

double positive(const std::string& key, const std::string& v) {
    const double x = to_real(key, v);
    if (!(x > 0.0)) throw ConfigError(key, "value must be positive");
    return x;
}

long integer(const std::string& key, const std::string& v) {
    const double x = to_real(key, v);
    if (x != std::floor(x) || std::abs(x) > 9e15) throw ConfigError(key, "value must be an integer");
    return static_cast<long>(x);
}

std::vector<double> real_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    if (trim(v).empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(positive(key, trim(item)));
    return out;
}

bool boolean(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, "expected true or false");
}

std::string format_real(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

std::string format_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_real(v[i]);
    return out;
}

const char* kind_name(InitialKind k) {
    switch (k) {
        case InitialKind::GroundStateScaled: return "ground_state_scaled";
        case InitialKind::Gaussian: return "gaussian";
        case InitialKind::StandingWave: return "standing_wave";
        case InitialKind::File: return "file";
    }
    return "?";
}

const char* n_kind_name(NKind k) {
    switch (k) {
        case NKind::Matched: return "matched";
        case NKind::Zero: return "zero";
        case NKind::Gaussian: return "gaussian";
    }
    return "?";
}

const std::vector<std::string> numeric_keys = {
    "grid.n", "grid.r_max", "alpha", "dt", "t_final", "sample_every", "initial.a", "initial.lambda",
    "initial.theta", "initial.sigma", "initial.n_a", "initial.n_sigma", "monitors.virial", "monitors.tails",
    "monitors.normal_form", "monitors.r_min", "monitors.tail_eps", "monitors.delta", "seed"};

void validate(const ScenarioConfig& c) {
    if (!(c.t_final > 0.0)) throw ConfigError("t_final", "missing or not positive");
    if (c.grid_r_max <= 0.0) throw ConfigError("grid.r_max", "value must be positive");
    if (c.initial_kind == InitialKind::File && c.initial_path.empty())
        throw ConfigError("initial.path", "required when initial.kind = file");
    if (c.monitors_normal_form > 0.0 && c.monitors_normal_form < minimal_beta(c.alpha))
        throw ConfigError("monitors.normal_form", "beta below 5 + |log2 alpha|");
    for (double R : c.monitors_virial)
        if (2.0 * R > c.grid_r_max) throw ConfigError("monitors.virial", "2R must not exceed grid.r_max");
    for (double R : c.monitors_tails)
        if (R >= c.grid_r_max) throw ConfigError("monitors.tails", "R must be below grid.r_max");
    if (c.monitors_tail_eps > 0.0)
        for (double R : c.monitors_virial)
            if (R >= c.monitors_r_min &&
                std::find(c.monitors_tails.begin(), c.monitors_tails.end(), R) == c.monitors_tails.end())
                throw ConfigError("monitors.tail_eps", "every audited virial radius must also be a tail radius");
}

RadialField gaussian_field(const RadialGrid& g, double a, double sigma) {
    return RadialField::from_function(g, [=](double r) { return cplx(a * std::exp(-0.5 * r * r / (sigma * sigma)), 0.0); });
}

// Columns r, re u, im u, re N, im N on the scenario's nodes.
State load_state_file(const ScenarioConfig& cfg, const RadialGrid& g) {
    std::ifstream in(cfg.initial_path);
    if (!in) throw ConfigError("initial.path", "cannot open '" + cfg.initial_path + "'");
    std::vector<cplx> u, n;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double r, ur, ui, nr, ni;
        if (!(ls >> r >> ur >> ui >> nr >> ni)) throw ConfigError("initial.path", "malformed row: '" + line + "'");
        const std::size_t j = u.size();
        if (j >= g.size() || std::abs(r - g.node(j)) > 1e-9 * (1.0 + r))
            throw ConfigError("initial.path", "rows do not match the grid nodes");
        u.emplace_back(ur, ui);
        n.emplace_back(nr, ni);
    }
    if (u.size() != g.size()) throw ConfigError("initial.path", "row count differs from grid.n");
    return State(RadialField(g, std::move(u)), RadialField(g, std::move(n)), cfg.alpha);
}

GroundState ground_state_for(const RadialGrid& g) {
    // The shooting solver wants r_max >= 15; small boxes borrow a reference grid.
    if (g.r_max() >= 15.0) return solve_ground_state(g);
    return solve_ground_state(make_grid(2047, 24.0));
}

void write_json(const std::filesystem::path& p, const json& j) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + p.string());
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

bool is_numeric_key(const std::string& key) {
    return std::find(numeric_keys.begin(), numeric_keys.end(), key) != numeric_keys.end();
}

void set_config_value(ScenarioConfig& c, const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    if (key == "name") {
        if (v.empty()) throw ConfigError(key, "must not be empty");
        c.name = v;
    } else if (key == "grid.n") {
        const long n = integer(key, v);
        if (n < 8) throw ConfigError(key, "must be at least 8");
        c.grid_n = static_cast<std::size_t>(n);
    } else if (key == "grid.r_max") {
        c.grid_r_max = positive(key, v);
    } else if (key == "alpha") {
        c.alpha = positive(key, v);
    } else if (key == "dt") {
        c.dt = positive(key, v);
    } else if (key == "t_final") {
        c.t_final = positive(key, v);
    } else if (key == "sample_every") {
        const long s = integer(key, v);
        if (s < 1) throw ConfigError(key, "must be at least 1");
        c.sample_every = static_cast<int>(s);
    } else if (key == "initial.kind") {
        if (v == "ground_state_scaled") c.initial_kind = InitialKind::GroundStateScaled;
        else if (v == "gaussian") c.initial_kind = InitialKind::Gaussian;
        else if (v == "standing_wave") c.initial_kind = InitialKind::StandingWave;
        else if (v == "file") c.initial_kind = InitialKind::File;
        else throw ConfigError(key, "unknown kind '" + v + "'");
    } else if (key == "initial.a") {
        c.initial_a = to_real(key, v);
    } else if (key == "initial.lambda") {
        c.initial_lambda = positive(key, v);
    } else if (key == "initial.theta") {
        c.initial_theta = to_real(key, v);
    } else if (key == "initial.sigma") {
        c.initial_sigma = positive(key, v);
    } else if (key == "initial.n_kind") {
        if (v == "matched") c.initial_n_kind = NKind::Matched;
        else if (v == "zero") c.initial_n_kind = NKind::Zero;
        else if (v == "gaussian") c.initial_n_kind = NKind::Gaussian;
        else throw ConfigError(key, "unknown kind '" + v + "'");
    } else if (key == "initial.n_a") {
        c.initial_n_a = to_real(key, v);
    } else if (key == "initial.n_sigma") {
        c.initial_n_sigma = positive(key, v);
    } else if (key == "initial.path") {
        c.initial_path = v;
    } else if (key == "monitors.virial") {
        c.monitors_virial = real_list(key, v);
    } else if (key == "monitors.tails") {
        c.monitors_tails = real_list(key, v);
    } else if (key == "monitors.norms") {
        c.monitors_norms = boolean(key, v);
    } else if (key == "monitors.normal_form") {
        const double b = to_real(key, v);
        if (b < 0.0) throw ConfigError(key, "must be >= 0");
        c.monitors_normal_form = b;
    } else if (key == "monitors.r_min") {
        const double r = to_real(key, v);
        if (r < 0.0) throw ConfigError(key, "must be >= 0");
        c.monitors_r_min = r;
    } else if (key == "monitors.tail_eps") {
        c.monitors_tail_eps = to_real(key, v);
    } else if (key == "monitors.delta") {
        const double d = to_real(key, v);
        if (!(d > 0.0 && d < 0.5)) throw ConfigError(key, "must lie in (0, 1/2)");
        c.monitors_delta = d;
    } else if (key == "output.dir") {
        c.output_dir = v;
    } else if (key == "seed") {
        const long s = integer(key, v);
        if (s < 0) throw ConfigError(key, "must be >= 0");
        c.seed = static_cast<std::uint64_t>(s);
    } else {
        throw ConfigError(key, "unknown key");
    }
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig c;
    std::istringstream in(text);
    std::string line;
    bool have_t = false, have_kind = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        set_config_value(c, key, line.substr(eq + 1));
        have_t = have_t || key == "t_final";
        have_kind = have_kind || key == "initial.kind";
    }
    if (!have_t) throw ConfigError("t_final", "missing required key");
    if (!have_kind) throw ConfigError("initial.kind", "missing required key");
    validate(c);
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
    std::ostringstream o;
    o << "name = " << c.name << '\n'
      << "grid.n = " << c.grid_n << '\n'
      << "grid.r_max = " << format_real(c.grid_r_max) << '\n'
      << "alpha = " << format_real(c.alpha) << '\n'
      << "dt = " << format_real(c.dt) << '\n'
      << "t_final = " << format_real(c.t_final) << '\n'
      << "sample_every = " << c.sample_every << '\n'
      << "initial.kind = " << kind_name(c.initial_kind) << '\n'
      << "initial.a = " << format_real(c.initial_a) << '\n'
      << "initial.lambda = " << format_real(c.initial_lambda) << '\n'
      << "initial.theta = " << format_real(c.initial_theta) << '\n'
      << "initial.sigma = " << format_real(c.initial_sigma) << '\n'
      << "initial.n_kind = " << n_kind_name(c.initial_n_kind) << '\n'
      << "initial.n_a = " << format_real(c.initial_n_a) << '\n'
      << "initial.n_sigma = " << format_real(c.initial_n_sigma) << '\n';
    if (!c.initial_path.empty()) o << "initial.path = " << c.initial_path << '\n';
    o << "monitors.virial = " << format_list(c.monitors_virial) << '\n'
      << "monitors.tails = " << format_list(c.monitors_tails) << '\n'
      << "monitors.norms = " << (c.monitors_norms ? "true" : "false") << '\n'
      << "monitors.normal_form = " << format_real(c.monitors_normal_form) << '\n'
      << "monitors.r_min = " << format_real(c.monitors_r_min) << '\n'
      << "monitors.tail_eps = " << format_real(c.monitors_tail_eps) << '\n'
      << "monitors.delta = " << format_real(c.monitors_delta) << '\n';
    if (!c.output_dir.empty()) o << "output.dir = " << c.output_dir << '\n';
    o << "seed = " << c.seed << '\n';
    return o.str();
}

State build_initial_state(const ScenarioConfig& cfg) {
    const auto g = make_grid(cfg.grid_n, cfg.grid_r_max);
    if (cfg.initial_kind == InitialKind::File) return load_state_file(cfg, g);

    RadialField u = RadialField::zeros(g);
    switch (cfg.initial_kind) {
        case InitialKind::GroundStateScaled:
        case InitialKind::StandingWave: {
            const auto gs = ground_state_for(g);
            u = scale_ground_state(gs, cfg.initial_lambda, g) * std::polar(cfg.initial_a, cfg.initial_theta);
            if (cfg.initial_kind == InitialKind::StandingWave)
                return State(u, abs_squared(u), cfg.alpha);
            break;
        }
        case InitialKind::Gaussian:
            u = gaussian_field(g, cfg.initial_a, cfg.initial_sigma) * std::polar(1.0, cfg.initial_theta);
            break;
        case InitialKind::File: break;
    }
    switch (cfg.initial_n_kind) {
        case NKind::Matched: return State(u, abs_squared(u), cfg.alpha);
        case NKind::Zero: return State(u, RadialField::zeros(g), cfg.alpha);
        case NKind::Gaussian: return State(u, gaussian_field(g, cfg.initial_n_a, cfg.initial_n_sigma), cfg.alpha);
    }
    return State(u, RadialField::zeros(g), cfg.alpha);
}

std::filesystem::path resolve_output_dir(const ScenarioConfig& cfg) {
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    if (const char* env = std::getenv("ZLAB_OUTPUT_DIR"); env != nullptr && *env != '\0')
        return std::filesystem::path(env) / cfg.name;
    return std::filesystem::path("zlab_runs") / cfg.name;
}

bool RunArtifacts::passed() const {
    return std::all_of(audits.begin(), audits.end(), [](const AuditOutcome& a) { return a.passed; });
}

RunArtifacts run_scenario(const ScenarioConfig& cfg) {
    validate(cfg);
    RunArtifacts art;
    art.output_dir = resolve_output_dir(cfg);
    std::filesystem::create_directories(art.output_dir);

    const State s0 = build_initial_state(cfg);
    const auto gs = ground_state_for(s0.grid());
    const auto cls = classify(s0, gs);

    EvolveOptions opts;
    opts.sample_every = cfg.sample_every;
    opts.virial = !cfg.monitors_virial.empty();
    opts.virial_radii = cfg.monitors_virial;
    opts.tail_radii = cfg.monitors_tails;
    opts.keep_states = cfg.monitors_norms || cfg.monitors_normal_form > 0.0;
    const auto traj = evolve(s0, cfg.t_final, cfg.dt, opts);

    art.trajectory_csv = art.output_dir / "trajectory.csv";
    {
        std::ofstream out(art.trajectory_csv);
        if (!out) throw std::runtime_error("cannot write " + art.trajectory_csv.string());
        write_trajectory_csv(traj, out);
    }

    const auto tc = threshold_constants(gs);
    json summary;
    summary["schema"] = "zlab-summary/1";
    summary["name"] = cfg.name;
    summary["config"] = serialize_config(cfg);
    summary["ground_state"] = {{"q0", gs.q0}, {"mass", tc.m_q}, {"e_s", tc.e_s_q}, {"j", tc.j_q}, {"threshold", tc.product}};
    summary["classification"] = {{"verdict", to_string(cls.verdict)},
                                 {"product", cls.product},
                                 {"threshold", cls.threshold},
                                 {"k0", cls.k0},
                                 {"tol_k", cls.tol_k},
                                 {"lambda_star", cls.lambda_star ? json(*cls.lambda_star) : json(nullptr)}};
    const auto cr = conservation_report(traj);
    summary["conservation_report"] = {{"mass_drift", finite_or_null(cr.mass_drift)},
                                      {"energy_drift", finite_or_null(cr.energy_drift)}};
    summary["run"] = {{"samples", traj.samples.size()},
                      {"t_end", traj.samples.empty() ? 0.0 : traj.samples.back().t},
                      {"dt", traj.dt},
                      {"blowup_suspected", traj.blowup_suspected},
                      {"blowup_time", traj.blowup_time},
                      {"blowup_reason", traj.blowup_reason},
                      {"boundary_warning", traj.boundary_warning},
                      {"boundary_time", traj.boundary_time}};

    json indicators = json::object();
    json audits_json = json::object();
    auto record_audit = [&](const std::string& name, bool passed, json body) {
        body["passed"] = passed;
        const auto path = art.output_dir / ("audit_" + name + ".json");
        write_json(path, body);
        art.audit_files.push_back(path);
        art.audits.push_back({name, passed});
        audits_json[name] = passed;
    };

    const bool below = cls.verdict == Verdict::Scattering || cls.verdict == Verdict::GrowUp;
    if (below && traj.samples.size() >= 2) {
        const auto sp = sign_persistence_audit(traj, cls.tol_k);
        record_audit("sign_persistence", !sp.sign_changed,
                     {{"initial_sign", sp.initial_sign},
                      {"min_k", sp.min_k},
                      {"max_k", sp.max_k},
                      {"sign_changed", sp.sign_changed},
                      {"first_change_time", sp.first_change_time}});
    }

    if (opts.virial && traj.samples.size() >= 3) {
        const auto mr = monotonicity_audit(traj, gs, cls.lambda_star.value_or(1.0), cls.verdict, cfg.monitors_r_min,
                                           cfg.monitors_tail_eps);
        json radii = json::array();
        for (std::size_t i = 0; i < mr.radii.size(); ++i)
            radii.push_back({{"R", mr.radii[i]},
                             {"min_slope", finite_or_null(mr.min_slope[i])},
                             {"max_slope", finite_or_null(mr.max_slope[i])},
                             {"audited_intervals", mr.audited[i]}});
        json violations = json::array();
        for (const auto& v : mr.violations) violations.push_back({{"R", v.R}, {"t", v.t}, {"slope", v.slope}});
        record_audit("virial", mr.passed(),
                     {{"verdict", to_string(mr.verdict)},
                      {"bound", mr.bound},
                      {"kappa_est", mr.kappa_est},
                      {"min_k", mr.min_k},
                      {"tail_eps", cfg.monitors_tail_eps},
                      {"radii", radii},
                      {"violations", violations}});
    }

    if (cfg.monitors_norms && traj.samples.size() >= 4) {
        const auto z = z_norm(traj, cfg.monitors_delta);
        indicators["z_norm"] = {{"delta", cfg.monitors_delta}, {"x", z.x}, {"y", z.y}};
        const auto si = scattering_indicator(traj, 5, cfg.monitors_delta);
        indicators["scattering"] = {{"u4_slope", si.u4_slope},
                                    {"u4_relative_change", si.u4_relative_change},
                                    {"cauchy_increments", si.cauchy_increments},
                                    {"trailing_x", si.trailing_x},
                                    {"u4_decreasing", si.u4_decreasing},
                                    {"cauchy_decreasing", si.cauchy_decreasing},
                                    {"scattering_consistent", si.scattering_consistent}};
        const auto gi = growup_indicator(traj);
        indicators["growup"] = {{"max_h1l2", gi.max_h1l2},
                                {"trailing_trend", gi.trailing_trend},
                                {"blowup_suspected", gi.blowup_suspected},
                                {"growup_consistent", gi.growup_consistent}};
        if (cls.verdict == Verdict::Scattering)
            record_audit("scattering_indicator", si.scattering_consistent, indicators["scattering"]);
        if (cls.verdict == Verdict::GrowUp)
            record_audit("growup_indicator", gi.growup_consistent, indicators["growup"]);
    }

    if (cfg.monitors_normal_form > 0.0) {
        const auto nf = normal_form_residual(traj, cfg.monitors_normal_form);
        record_audit("normal_form", nf.max_residual <= 5e-2,
                     {{"beta", nf.beta},
                      {"max_residual", nf.max_residual},
                      {"scale", nf.scale},
                      {"max_boundary_norm", nf.max_boundary_norm},
                      {"max_duhamel_norm", nf.max_duhamel_norm},
                      {"tolerance", 5e-2}});
    }

    summary["indicators"] = indicators;
    summary["audits"] = audits_json;
    bool all = true;
    for (const auto& a : art.audits) all = all && a.passed;
    summary["passed"] = all;

    art.summary_json = art.output_dir / "summary.json";
    write_json(art.summary_json, summary);
    art.summary = summary.dump(2);
    return art;
}

std::vector<SweepRow> sweep(const ScenarioConfig& cfg, const std::string& key, const std::vector<double>& values,
                            int workers) {
    if (!is_numeric_key(key)) throw ConfigError(key, "not a numeric key");
    if (workers < 1) throw std::invalid_argument("sweep: workers must be at least 1");
    std::vector<SweepRow> rows(values.size());
    if (values.empty()) return rows;
    const auto base = resolve_output_dir(cfg);

    auto one = [&](std::size_t i) {
        SweepRow& row = rows[i];
        row.value = values[i];
        try {
            ScenarioConfig c = cfg;
            std::ostringstream label;
            label << key << '=' << values[i];
            set_config_value(c, key, format_real(values[i]));
            c.output_dir = (base / label.str()).string();
            c.name = cfg.name + "-" + label.str();
            const auto art = run_scenario(c);
            const auto j = json::parse(art.summary);
            row.verdict = j["classification"]["verdict"];
            row.k0 = j["classification"]["k0"];
            row.product = j["classification"]["product"];
            row.passed = art.passed();
            if (j["conservation_report"]["mass_drift"].is_number())
                row.columns["mass_drift"] = j["conservation_report"]["mass_drift"];
            row.columns["blowup_suspected"] = j["run"]["blowup_suspected"].get<bool>() ? 1.0 : 0.0;
            for (const auto& f : art.audit_files) {
                if (f.filename() != "audit_virial.json") continue;
                std::ifstream in(f);
                const auto v = json::parse(in);
                for (const auto& r : v["radii"])
                    if (r["min_slope"].is_number()) {
                        std::ostringstream name;
                        name << "min_slope_R" << r["R"].get<double>();
                        row.columns[name.str()] = r["min_slope"];
                        std::ostringstream mx;
                        mx << "max_slope_R" << r["R"].get<double>();
                        row.columns[mx.str()] = r["max_slope"];
                    }
            }
        } catch (const std::exception& e) {
            row.passed = false;
            row.error = e.what();
        }
    };

    const std::size_t pool = std::min<std::size_t>(static_cast<std::size_t>(workers), values.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < pool; ++w)
        threads.emplace_back([&] {
            for (std::size_t i = next++; i < values.size(); i = next++) one(i);
        });
    for (auto& t : threads) t.join();
    return rows;
}

std::string sweep_table_csv(const std::vector<SweepRow>& rows, const std::string& key) {
    std::vector<std::string> extra;
    for (const auto& r : rows)
        for (const auto& [name, _] : r.columns)
            if (std::find(extra.begin(), extra.end(), name) == extra.end()) extra.push_back(name);
    std::sort(extra.begin(), extra.end());
    std::ostringstream o;
    o.precision(10);
    o << key << ",verdict,passed,k0,product";
    for (const auto& e : extra) o << ',' << e;
    o << ",error\n";
    for (const auto& r : rows) {
        o << r.value << ',' << r.verdict << ',' << (r.passed ? 1 : 0) << ',' << r.k0 << ',' << r.product;
        for (const auto& e : extra) {
            o << ',';
            if (auto it = r.columns.find(e); it != r.columns.end()) o << it->second;
        }
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        o << ',' << err << '\n';
    }
    return o.str();
}

}  // namespace zlab
