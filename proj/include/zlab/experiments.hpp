#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zlab/state.hpp"

namespace zlab {

/// Raised for malformed or invalid configuration; key() names the culprit.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& what);
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

enum class InitialKind { GroundStateScaled, Gaussian, StandingWave, File };
enum class NKind { Matched, Zero, Gaussian };

struct ScenarioConfig {
    std::string name = "run";
    std::size_t grid_n = 2048;
    double grid_r_max = 48.0;
    double alpha = 1.0;
    double dt = 1e-3;
    double t_final = 0.0;  ///< required
    int sample_every = 10;

    InitialKind initial_kind = InitialKind::GroundStateScaled;  ///< required
    double initial_a = 1.0;
    double initial_lambda = 1.0;
    double initial_theta = 0.0;
    double initial_sigma = 1.0;
    NKind initial_n_kind = NKind::Matched;
    double initial_n_a = 0.1;
    double initial_n_sigma = 1.0;
    std::string initial_path;

    std::vector<double> monitors_virial;  ///< V_R radii
    std::vector<double> monitors_tails;   ///< tail radii
    bool monitors_norms = false;
    double monitors_normal_form = 0.0;    ///< beta; 0 disables
    double monitors_r_min = 0.0;          ///< smallest R in the scattering slope audit
    double monitors_tail_eps = -1.0;      ///< tail gate for the scattering slope audit; <= 0 disables
    double monitors_delta = 0.1;          ///< delta of the X and Y norms

    std::string output_dir;  ///< empty: $ZLAB_OUTPUT_DIR/<name>, else ./zlab_runs/<name>
    std::uint64_t seed = 1;

    bool operator==(const ScenarioConfig&) const = default;
};

/// `key = value` lines; `#` starts a comment; lists are comma separated.
/// Required keys: t_final, initial.kind.  Throws ConfigError.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Every key, in parse_config's syntax.
std::string serialize_config(const ScenarioConfig& cfg);

/// Assigns one key from its textual value, with the same validation as parse_config.
void set_config_value(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// The numeric keys a sweep may vary.
bool is_numeric_key(const std::string& key);

State build_initial_state(const ScenarioConfig& cfg);

std::filesystem::path resolve_output_dir(const ScenarioConfig& cfg);

struct AuditOutcome {
    std::string name;
    bool passed = true;
};

struct RunArtifacts {
    std::filesystem::path output_dir;
    std::filesystem::path trajectory_csv;
    std::filesystem::path summary_json;
    std::vector<std::filesystem::path> audit_files;
    std::string summary;  ///< JSON text of summary.json
    std::vector<AuditOutcome> audits;
    bool passed() const;
};

/// Builds the state, classifies it, evolves, evaluates the enabled monitors and
/// writes trajectory.csv, summary.json and one audit_<name>.json per audit.
RunArtifacts run_scenario(const ScenarioConfig& cfg);

struct SweepRow {
    double value = 0.0;
    std::string verdict;
    bool passed = false;
    std::string error;  ///< empty on success
    double k0 = 0.0;
    double product = 0.0;
    std::map<std::string, double> columns;  ///< flat numeric extracts of the summary
};

/// One run per value with `key` set, at most `workers` at a time.  Each run
/// writes below <output dir>/<key>=<value>.  Failures stay inside their row.
std::vector<SweepRow> sweep(const ScenarioConfig& cfg, const std::string& key, const std::vector<double>& values,
                            int workers);

/// CSV table of sweep rows: fixed columns, then the union of extracted columns.
std::string sweep_table_csv(const std::vector<SweepRow>& rows, const std::string& key);

}  // namespace zlab
