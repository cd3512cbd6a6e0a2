#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kerrkick/analysis.hpp"
#include "kerrkick/classical.hpp"
#include "kerrkick/fock.hpp"

namespace kerrkick {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RunMode { trajectory, bifurcation, entropy_sweep, lyapunov, decay_fit, spectrum };

const char* to_string(RunMode mode);
std::optional<RunMode> parse_run_mode(const std::string& name);

struct SweepSpec {
    std::string name;  // epsilon | delta_epsilon | chi | period
    double start = 0.0;
    double stop = 0.0;
    int steps = 1;  // number of intervals; points = steps + 1
};

/// Analysis knobs shared by the CLI and the sweep runner.
struct AnalysisSettings {
    long t_min = -1;  // -1: automatic (first local minimum, capped at 10%)
    long t_max = -1;  // -1: series end
    bool include_dc = true;
    double log_base = 0.0;  // 0: natural logarithm
    DecayRegime regime = DecayRegime::gaussian;
    LyapunovSettings lyapunov;
    ClassifySettings classify;
    long transient = 2000;  // classical scan
    long samples = 500;
};

enum class OutputFormat { csv, json };

struct RunConfig {
    RunMode mode = RunMode::trajectory;
    SystemParams system;
    std::optional<SweepSpec> sweep;
    AnalysisSettings analysis;
    std::filesystem::path out_dir = "out";
    OutputFormat format = OutputFormat::csv;
    int workers = 1;

    void validate() const;
};

/// Deterministic FNV-1a hash of the canonical config text. Worker count and
/// output directory are excluded: they may not change results.
std::uint64_t config_hash(const RunConfig& config);

struct ArtifactRecord {
    std::string file;       // relative to out_dir
    std::string status;     // "ok" | error text
    double seconds = 0.0;
    std::string point;      // swept parameter echo, empty for single runs
};

struct RunManifest {
    std::string version;
    std::string mode;
    std::uint64_t hash = 0;
    std::vector<ArtifactRecord> artifacts;
    std::string status;  // "ok" | "partial" | "skipped"
    bool idempotent_skip = false;
    double wall_seconds = 0.0;
    std::string config_text;  // canonical echo

    std::string to_json() const;
};

/// Dispatch a validated config: run the mode (sweeps fan out over a worker
/// pool), write per-point outputs atomically, then write manifest.json.
/// Per-point failures are recorded without aborting the remaining points.
/// A pre-existing manifest with the same hash and intact files short-circuits
/// into an idempotent skip.
RunManifest execute(const RunConfig& config);

/// Write the plot data for one of the paper-style figure panels from runs
/// already present under out_dir. Returns the files written. Unknown ids and
/// missing prerequisite runs raise UsageError naming what is needed.
std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& out_dir,
                                                  const std::string& figure_id);

std::vector<std::string> known_figure_ids();

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kerrkick
