#include "kerrkick/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kerrkick/csv.hpp"
#include "kerrkick/evolution.hpp"
#include "parallel.hpp"

namespace kerrkick {

using json = nlohmann::json;
namespace fs = std::filesystem;

const char* to_string(RunMode mode) {
    switch (mode) {
        case RunMode::trajectory: return "trajectory";
        case RunMode::bifurcation: return "bifurcation";
        case RunMode::entropy_sweep: return "entropy_sweep";
        case RunMode::lyapunov: return "lyapunov";
        case RunMode::decay_fit: return "decay_fit";
        case RunMode::spectrum: return "spectrum";
    }
    return "?";
}

std::optional<RunMode> parse_run_mode(const std::string& name) {
    for (RunMode m : {RunMode::trajectory, RunMode::bifurcation, RunMode::entropy_sweep,
                      RunMode::lyapunov, RunMode::decay_fit, RunMode::spectrum})
        if (name == to_string(m)) return m;
    return std::nullopt;
}

namespace {

const char* to_string(DynamicsClass c) {
    switch (c) {
        case DynamicsClass::regular: return "regular";
        case DynamicsClass::quasi_periodic: return "quasi_periodic";
        case DynamicsClass::chaotic: return "chaotic";
        case DynamicsClass::indeterminate: return "indeterminate";
    }
    return "?";
}

bool valid_sweep_name(const std::string& name) {
    return name == "epsilon" || name == "delta_epsilon" || name == "chi" || name == "period";
}

void apply_sweep_value(SystemParams& p, const std::string& name, double value) {
    if (name == "epsilon") p.epsilon = value;
    else if (name == "delta_epsilon") p.delta_epsilon = value;
    else if (name == "chi") p.chi = value;
    else if (name == "period") p.period = value;
    else throw UsageError("unknown sweep parameter: " + name);
}

std::vector<double> sweep_values(const SweepSpec& s) {
    std::vector<double> v(static_cast<std::size_t>(s.steps) + 1);
    for (int i = 0; i <= s.steps; ++i)
        v[i] = (s.steps == 0) ? s.start
                              : s.start + (s.stop - s.start) * static_cast<double>(i) / s.steps;
    return v;
}

}  // namespace

void RunConfig::validate() const {
    system.validate();
    if (workers < 1) throw UsageError("workers must be >= 1");
    if (sweep) {
        if (!valid_sweep_name(sweep->name))
            throw UsageError("sweep parameter must be one of epsilon, delta_epsilon, chi, period");
        if (sweep->steps < 1) throw UsageError("sweep steps must be >= 1");
        if (!std::isfinite(sweep->start) || !std::isfinite(sweep->stop) ||
            sweep->start > sweep->stop)
            throw UsageError("sweep bounds must be finite with start <= stop");
    }
    if (mode == RunMode::bifurcation || mode == RunMode::entropy_sweep) {
        if (!sweep)
            throw UsageError(std::string(to_string(mode)) +
                             " requires --sweep epsilon <start> <stop> <steps>");
        if (sweep->name != "epsilon")
            throw UsageError(std::string(to_string(mode)) + " sweeps over epsilon only");
    }
    if (mode != RunMode::bifurcation && system.kicks < 1)
        throw UsageError("kicks must be >= 1 for this mode");
    if (analysis.transient < 0 || analysis.samples < 1)
        throw UsageError("classical transient must be >= 0 and samples >= 1");
}

namespace {

std::string canonical_text(const RunConfig& c) {
    std::ostringstream os;
    os << "mode=" << to_string(c.mode) << "\n";
    os << "chi=" << format_full(c.system.chi) << "\n";
    os << "period=" << format_full(c.system.period) << "\n";
    os << "epsilon=" << format_full(c.system.epsilon) << "\n";
    os << "delta_epsilon=" << format_full(c.system.delta_epsilon) << "\n";
    os << "dim=" << c.system.dim << "\n";
    os << "buffer=" << c.system.buffer << "\n";
    os << "kicks=" << c.system.kicks << "\n";
    os << "stride=" << c.system.stride << "\n";
    if (c.sweep)
        os << "sweep=" << c.sweep->name << "," << format_full(c.sweep->start) << ","
           << format_full(c.sweep->stop) << "," << c.sweep->steps << "\n";
    os << "format=" << (c.format == OutputFormat::csv ? "csv" : "json") << "\n";
    const AnalysisSettings& a = c.analysis;
    os << "analysis.t_min=" << a.t_min << "\n";
    os << "analysis.t_max=" << a.t_max << "\n";
    os << "analysis.include_dc=" << (a.include_dc ? 1 : 0) << "\n";
    os << "analysis.log_base=" << format_full(a.log_base) << "\n";
    os << "analysis.regime=" << (a.regime == DecayRegime::gaussian ? "gaussian" : "exponential")
       << "\n";
    os << "analysis.embedding_dim=" << a.lyapunov.embedding_dim << "\n";
    os << "analysis.delay=" << a.lyapunov.delay << "\n";
    os << "analysis.theiler=" << a.lyapunov.theiler << "\n";
    os << "analysis.radius_fraction=" << format_full(a.lyapunov.radius_fraction) << "\n";
    os << "analysis.fit_begin=" << a.lyapunov.fit_begin << "\n";
    os << "analysis.fit_end=" << a.lyapunov.fit_end << "\n";
    os << "analysis.max_references=" << a.lyapunov.max_references << "\n";
    os << "analysis.min_neighbors=" << a.lyapunov.min_neighbors << "\n";
    os << "analysis.distinct_tol=" << format_full(a.classify.distinct_tol) << "\n";
    os << "analysis.max_period=" << a.classify.max_period << "\n";
    os << "analysis.band_tol=" << format_full(a.classify.band_tol) << "\n";
    os << "analysis.transient=" << a.transient << "\n";
    os << "analysis.samples=" << a.samples << "\n";
    return os.str();
}

}  // namespace

std::uint64_t config_hash(const RunConfig& config) {
    const std::string text = canonical_text(config);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string RunManifest::to_json() const {
    json j;
    j["version"] = version;
    j["mode"] = mode;
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    j["config_hash"] = hex;
    j["status"] = status;
    j["idempotent_skip"] = idempotent_skip;
    j["wall_seconds"] = wall_seconds;
    j["config"] = config_text;
    j["artifacts"] = json::array();
    for (const auto& a : artifacts) {
        json ja;
        ja["file"] = a.file;
        ja["status"] = a.status;
        ja["seconds"] = a.seconds;
        if (!a.point.empty()) ja["point"] = a.point;
        j["artifacts"].push_back(ja);
    }
    return j.dump(2) + "\n";
}

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string point_echo(const RunConfig& c, double value) {
    return c.sweep ? c.sweep->name + "=" + format_full(value) : std::string();
}

std::string sweep_file(const char* stem, int index, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%04d.%s", stem, index, ext);
    return buf;
}

// --- per-mode output writers -------------------------------------------------

void write_trajectory_json(const TrajectoryRecord& rec, const fs::path& path) {
    json j;
    j["params"] = {{"chi", rec.params.chi},         {"period", rec.params.period},
                   {"epsilon", rec.params.epsilon}, {"delta_epsilon", rec.params.delta_epsilon},
                   {"dim", rec.params.dim},         {"buffer", rec.params.buffer},
                   {"kicks", rec.params.kicks},     {"stride", rec.params.stride}};
    j["leak_max"] = rec.leak_max;
    j["truncation_safe"] = rec.truncation_safe;
    json ks = json::array();
    for (std::size_t i = 0; i < rec.fidelity.size(); ++i) ks.push_back(rec.fidelity.kick_at(i));
    j["k"] = std::move(ks);
    j["F"] = rec.fidelity.values;
    j["F_N"] = rec.f_n.values;
    j["mean_n"] = rec.mean_photons_u.values;
    write_text_atomic(path, j.dump(2) + "\n");
}

TimeSeries analysis_slice(const TimeSeries& full, const AnalysisSettings& a,
                          std::size_t auto_start) {
    const std::size_t n = full.size();
    std::size_t lo = (a.t_min >= 0) ? static_cast<std::size_t>(a.t_min) : auto_start;
    std::size_t hi = (a.t_max >= 0) ? static_cast<std::size_t>(a.t_max) : n;
    if (hi > n) hi = n;
    if (lo + 2 > hi) throw std::invalid_argument("analysis window outside series");
    TimeSeries out;
    out.values.assign(full.values.begin() + lo, full.values.begin() + hi);
    out.t0 = full.kick_at(lo);
    out.stride = full.stride;
    return out;
}

}  // namespace

RunManifest execute(const RunConfig& config) {
    config.validate();
    const Timer wall;
    RunManifest manifest;
    manifest.version = kVersion;
    manifest.mode = to_string(config.mode);
    manifest.hash = config_hash(config);
    manifest.config_text = canonical_text(config);
    manifest.status = "ok";

    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + config.out_dir.string());

    const fs::path manifest_path = config.out_dir / "manifest.json";
    if (fs::exists(manifest_path)) {
        try {
            json prev = json::parse(std::ifstream(manifest_path));
            char hex[24];
            std::snprintf(hex, sizeof(hex), "%016llx",
                          static_cast<unsigned long long>(manifest.hash));
            if (prev.value("config_hash", "") == hex && prev.value("status", "") == "ok") {
                bool all_present = true;
                for (const auto& a : prev["artifacts"])
                    if (!fs::exists(config.out_dir / a.value("file", "")))
                        all_present = false;
                if (all_present) {
                    manifest.idempotent_skip = true;
                    manifest.status = "skipped";
                    for (const auto& a : prev["artifacts"])
                        manifest.artifacts.push_back(
                            {a.value("file", ""), "ok (reused)", 0.0, a.value("point", "")});
                    manifest.wall_seconds = wall.seconds();
                    write_text_atomic(manifest_path, manifest.to_json());
                    return manifest;
                }
            }
        } catch (const json::exception&) {
            // unreadable manifest: fall through and recompute
        }
    }

    const char* ext = (config.format == OutputFormat::csv) ? "csv" : "json";
    const bool swept = config.sweep.has_value();
    const std::vector<double> values = swept ? sweep_values(*config.sweep) : std::vector<double>{};

    auto record_artifact = [&](const std::string& file, const std::string& status, double secs,
                               const std::string& point) {
        manifest.artifacts.push_back({file, status, secs, point});
        if (status != "ok") manifest.status = "partial";
    };

    switch (config.mode) {
        case RunMode::trajectory: {
            const int n_points = swept ? static_cast<int>(values.size()) : 1;
            std::vector<ArtifactRecord> records(n_points);
            detail::parallel_for(n_points, config.workers, [&](int i) {
                const Timer t;
                SystemParams p = config.system;
                std::string point;
                std::string file = std::string("trajectory.") + ext;
                if (swept) {
                    apply_sweep_value(p, config.sweep->name, values[i]);
                    point = point_echo(config, values[i]);
                    file = sweep_file("trajectory", i, ext);
                }
                ArtifactRecord rec{file, "ok", 0.0, point};
                try {
                    TrajectoryRecord run = run_trajectory(p);
                    if (config.format == OutputFormat::csv)
                        write_trajectory_csv(run, config.out_dir / file);
                    else
                        write_trajectory_json(run, config.out_dir / file);
                } catch (const std::exception& e) {
                    rec.status = e.what();
                }
                rec.seconds = t.seconds();
                records[i] = std::move(rec);
            });
            for (auto& r : records) record_artifact(r.file, r.status, r.seconds, r.point);
            break;
        }

        case RunMode::bifurcation: {
            const Timer t;
            ScanSettings settings{config.analysis.transient, config.analysis.samples,
                                  config.workers};
            BifurcationScan scan =
                bifurcation_scan(config.system.chi, config.system.period, config.sweep->start,
                                 config.sweep->stop, config.sweep->steps, settings);
            const std::string file = "bifurcation.csv";
            write_bifurcation_csv(scan, config.out_dir / file);
            record_artifact(file, "ok", t.seconds(), "");
            break;
        }

        case RunMode::entropy_sweep: {
            const int n_points = static_cast<int>(values.size());
            struct Point {
                double entropy = 0.0;
                int bins = 0;
                bool safe = true;
                std::string error;
            };
            std::vector<Point> points(n_points);
            // one common window for every epsilon so entropies are comparable
            const std::size_t series_len =
                static_cast<std::size_t>(config.system.kicks / config.system.stride) + 1;
            const std::size_t lo =
                (config.analysis.t_min >= 0) ? static_cast<std::size_t>(config.analysis.t_min)
                                             : series_len / 10;
            const std::size_t hi = (config.analysis.t_max >= 0)
                                       ? static_cast<std::size_t>(config.analysis.t_max)
                                       : series_len;
            detail::parallel_for(n_points, config.workers, [&](int i) {
                try {
                    SystemParams p = config.system;
                    apply_sweep_value(p, "epsilon", values[i]);
                    TrajectoryRecord run = run_trajectory(p);
                    AnalysisSettings a = config.analysis;
                    a.t_min = static_cast<long>(lo);
                    a.t_max = static_cast<long>(std::min(hi, run.fidelity.size()));
                    TimeSeries window = analysis_slice(run.fidelity, a, lo);
                    EntropyResult ent = spectral_entropy(
                        power_spectrum(window), config.analysis.include_dc,
                        config.analysis.log_base);
                    points[i] = {ent.entropy, ent.bins_used, run.truncation_safe, ""};
                } catch (const std::exception& e) {
                    points[i].error = e.what();
                }
            });
            const Timer t;
            const std::string file = "entropy.csv";
            CsvFile csv(config.out_dir / file);
            csv.comment("mode = entropy_sweep");
            csv.comment_params(config.system);
            csv.comment("window = [" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
            csv.comment(std::string("include_dc = ") +
                        (config.analysis.include_dc ? "true" : "false"));
            csv.comment("log_base = " +
                        (config.analysis.log_base > 0.0 ? format_full(config.analysis.log_base)
                                                        : std::string("e")));
            csv.header({"epsilon", "entropy", "bins_used", "truncation_safe"});
            for (int i = 0; i < n_points; ++i) {
                if (!points[i].error.empty()) {
                    record_artifact(file, "point " + std::to_string(i) + ": " + points[i].error,
                                    0.0, point_echo(config, values[i]));
                    continue;
                }
                csv.begin_row();
                csv.field(values[i]);
                csv.field(points[i].entropy);
                csv.field_int(points[i].bins);
                csv.field_int(points[i].safe ? 1 : 0);
                csv.end_row();
            }
            csv.commit();
            record_artifact(file, "ok", t.seconds(), "");
            break;
        }

        case RunMode::lyapunov: {
            const int n_points = swept ? static_cast<int>(values.size()) : 1;
            struct Point {
                LyapunovEstimate est;
                DynamicsClass cls = DynamicsClass::indeterminate;
                bool safe = true;
                std::string error;
            };
            std::vector<Point> points(n_points);
            detail::parallel_for(n_points, config.workers, [&](int i) {
                try {
                    SystemParams p = config.system;
                    if (swept) apply_sweep_value(p, config.sweep->name, values[i]);
                    TrajectoryRecord run = run_trajectory(p);
                    TimeSeries window = analysis_slice(run.fidelity, config.analysis,
                                                       default_window_start(run.fidelity));
                    points[i].est = estimate_lyapunov(window, config.analysis.lyapunov);
                    points[i].cls = classify_dynamics(points[i].est);
                    points[i].safe = run.truncation_safe;
                } catch (const std::exception& e) {
                    points[i].error = e.what();
                }
            });
            const Timer t;
            const std::string summary = "lyapunov.csv";
            CsvFile csv(config.out_dir / summary);
            csv.comment("mode = lyapunov");
            csv.comment_params(config.system);
            csv.header({"param", "lambda_max", "delay", "embedding_dim", "theiler", "fit_begin",
                        "fit_end", "r_squared", "references", "class"});
            for (int i = 0; i < n_points; ++i) {
                const double value = swept ? values[i] : config.system.epsilon;
                if (!points[i].error.empty()) {
                    record_artifact(summary, "point " + std::to_string(i) + ": " + points[i].error,
                                    0.0, point_echo(config, value));
                    continue;
                }
                const LyapunovEstimate& e = points[i].est;
                csv.begin_row();
                csv.field(value);
                csv.field(e.lambda_max);
                csv.field_int(e.delay);
                csv.field_int(e.embedding_dim);
                csv.field_int(e.theiler);
                csv.field_int(e.fit_begin);
                csv.field_int(e.fit_end);
                csv.field(e.r_squared);
                csv.field_int(e.references_used);
                csv.field_text(to_string(points[i].cls));
                csv.end_row();
                const std::string curve_file =
                    swept ? sweep_file("lyapunov_curve", i, "csv") : "lyapunov_curve.csv";
                CsvFile curve(config.out_dir / curve_file);
                curve.comment("divergence curve S(s); lambda_max = slope over fit range");
                curve.comment("param = " + format_full(value));
                curve.comment("lambda_max = " + format_full(e.lambda_max));
                curve.header({"s", "S"});
                for (std::size_t s = 0; s < e.divergence_curve.size(); ++s) {
                    curve.begin_row();
                    curve.field_int(static_cast<long>(s));
                    curve.field(e.divergence_curve[s]);
                    curve.end_row();
                }
                curve.commit();
                record_artifact(curve_file, "ok", 0.0, point_echo(config, value));
            }
            csv.commit();
            record_artifact(summary, "ok", t.seconds(), "");
            break;
        }

        case RunMode::decay_fit: {
            const int n_points = swept ? static_cast<int>(values.size()) : 1;
            struct Point {
                DecayFit fit;
                TrajectoryRecord run;
                std::string error;
            };
            std::vector<Point> points(n_points);
            detail::parallel_for(n_points, config.workers, [&](int i) {
                try {
                    SystemParams p = config.system;
                    if (swept) apply_sweep_value(p, config.sweep->name, values[i]);
                    points[i].run = run_trajectory(p);
                    points[i].fit = fit_decay(points[i].run.fidelity, config.analysis.regime);
                } catch (const std::exception& e) {
                    points[i].error = e.what();
                }
            });
            const Timer t;
            for (int i = 0; i < n_points; ++i) {
                const double value = swept ? values[i] : config.system.delta_epsilon;
                const std::string file =
                    swept ? sweep_file("decay_fit", i, "csv") : "decay_fit.csv";
                if (!points[i].error.empty()) {
                    record_artifact(file, points[i].error, 0.0, point_echo(config, value));
                    continue;
                }
                const DecayFit& f = points[i].fit;
                CsvFile csv(config.out_dir / file);
                csv.comment("mode = decay_fit");
                csv.comment_params(points[i].run.params);
                csv.comment(std::string("regime = ") +
                            (f.regime == DecayRegime::gaussian ? "gaussian" : "exponential"));
                csv.comment("slope = " + format_full(f.slope));
                csv.comment("intercept = " + format_full(f.intercept));
                csv.comment("r_squared = " + format_full(f.r_squared));
                csv.comment("window = [" + std::to_string(f.window.begin) + ", " +
                            std::to_string(f.window.end) + ")");
                csv.header({"k", "F", "ln_F", "fit"});
                const TimeSeries& fid = points[i].run.fidelity;
                for (std::size_t j = f.window.begin; j < f.window.end; ++j) {
                    const double k = static_cast<double>(fid.kick_at(j));
                    const double xv = (f.regime == DecayRegime::gaussian) ? k * k : k;
                    csv.begin_row();
                    csv.field_int(fid.kick_at(j));
                    csv.field(fid.values[j]);
                    csv.field(std::log(fid.values[j]));
                    csv.field(f.intercept + f.slope * xv);
                    csv.end_row();
                }
                csv.commit();
                record_artifact(file, "ok", 0.0, point_echo(config, value));
            }
            (void)t;
            break;
        }

        case RunMode::spectrum: {
            const int n_points = swept ? static_cast<int>(values.size()) : 1;
            std::vector<ArtifactRecord> records(n_points);
            detail::parallel_for(n_points, config.workers, [&](int i) {
                const Timer t;
                SystemParams p = config.system;
                std::string point;
                std::string file = "spectrum.csv";
                if (swept) {
                    apply_sweep_value(p, config.sweep->name, values[i]);
                    point = point_echo(config, values[i]);
                    file = sweep_file("spectrum", i, "csv");
                }
                ArtifactRecord rec{file, "ok", 0.0, point};
                try {
                    TrajectoryRecord run = run_trajectory(p);
                    TimeSeries window = analysis_slice(run.fidelity, config.analysis,
                                                       default_window_start(run.fidelity));
                    PowerSpectrum spec = power_spectrum(window);
                    write_spectrum_csv(spec, config.out_dir / file,
                                       {"mode = spectrum", "epsilon = " + format_full(p.epsilon),
                                        "delta_epsilon = " + format_full(p.delta_epsilon),
                                        "window_t0 = " + std::to_string(window.t0),
                                        "window_len = " + std::to_string(window.size())});
                } catch (const std::exception& e) {
                    rec.status = e.what();
                }
                rec.seconds = t.seconds();
                records[i] = std::move(rec);
            });
            for (auto& r : records) record_artifact(r.file, r.status, r.seconds, r.point);
            break;
        }
    }

    manifest.wall_seconds = wall.seconds();
    write_text_atomic(manifest_path, manifest.to_json());
    return manifest;
}

// --- figure emission ---------------------------------------------------------

namespace {

struct SourceSeries {
    SystemParams params;
    std::vector<long> k;
    std::vector<double> f, f_n, mean_n;
};

// Parse a trajectory CSV written by write_trajectory_csv.
std::optional<SourceSeries> read_trajectory_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    SourceSeries s;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1);
            std::string value = line.substr(eq + 1);
            auto trim = [](std::string& t) {
                t.erase(0, t.find_first_not_of(" \t"));
                t.erase(t.find_last_not_of(" \t") + 1);
            };
            trim(key);
            trim(value);
            try {
                if (key == "chi") s.params.chi = std::stod(value);
                else if (key == "period") s.params.period = std::stod(value);
                else if (key == "epsilon") s.params.epsilon = std::stod(value);
                else if (key == "delta_epsilon") s.params.delta_epsilon = std::stod(value);
                else if (key == "dim") s.params.dim = std::stoi(value);
                else if (key == "buffer") s.params.buffer = std::stoi(value);
                else if (key == "kicks") s.params.kicks = std::stol(value);
                else if (key == "stride") s.params.stride = std::stol(value);
            } catch (const std::exception&) {
                return std::nullopt;
            }
            continue;
        }
        if (!header_seen) {  // column header
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        double vals[4];
        int col = 0;
        while (col < 4 && std::getline(row, cell, ',')) vals[col++] = std::stod(cell);
        if (col != 4) return std::nullopt;
        s.k.push_back(static_cast<long>(vals[0]));
        s.f.push_back(vals[1]);
        s.f_n.push_back(vals[2]);
        s.mean_n.push_back(vals[3]);
    }
    if (s.k.empty()) return std::nullopt;
    return s;
}

bool close_to(double a, double b) { return std::abs(a - b) <= 1e-12 + 1e-9 * std::abs(b); }

std::optional<SourceSeries> find_trajectory(const fs::path& dir, double epsilon,
                                            double delta_epsilon) {
    std::vector<fs::path> candidates;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("trajectory", 0) == 0 && entry.path().extension() == ".csv")
            candidates.push_back(entry.path());
    }
    std::sort(candidates.begin(), candidates.end());
    for (const auto& path : candidates) {
        auto s = read_trajectory_csv(path);
        if (s && close_to(s->params.epsilon, epsilon) &&
            close_to(s->params.delta_epsilon, delta_epsilon))
            return s;
    }
    return std::nullopt;
}

struct FigureSpec {
    const char* id;
    double epsilon;
    double delta_epsilon;
    const char* kind;  // kF | k2lnF | klnF | kFN_F | kFN | kN | entropy
    const char* description;
};

constexpr FigureSpec kFigures[] = {
    {"fig1", 0.1, 0.001, "kF",
     "Fidelity F vs kick number; regular regime, single-frequency oscillation with full "
     "recurrences."},
    {"fig2a", 0.1, 0.001, "kF", "F vs kicks; recurrence period ~3e3 kicks."},
    {"fig2b", 0.1, 0.005, "kF", "F vs kicks; recurrence period ~630 kicks."},
    {"fig2c", 0.1, 0.08, "kF", "F vs kicks; recurrence period ~40 kicks."},
    {"fig3", 0.1, 0.05, "k2lnF",
     "ln F vs k^2 over the initial decay; linear trend = Gaussian decay regime."},
    {"fig4a", 0.385, 0.001, "kF", "F vs kicks near the chaos border; slow beat modulation."},
    {"fig4b", 0.505, 0.001, "kF", "F vs kicks in the chaotic regime; irregular fluctuations."},
    {"fig5a", 0.7, 0.005, "klnF", "ln F vs kicks, chaotic regime, weak perturbation."},
    {"fig5b", 0.7, 0.01, "klnF", "ln F vs kicks, chaotic regime."},
    {"fig5c", 0.7, 0.05, "klnF", "ln F vs kicks, chaotic regime."},
    {"fig5d", 0.7, 0.08, "klnF", "ln F vs kicks, chaotic regime, strongest perturbation."},
    {"fig6a", 0.7, 0.001, "k2lnF", "ln F vs k^2 at weak perturbation; Gaussian-type decay."},
    {"fig6b", 0.7, 0.05, "klnF", "ln F vs kicks; near-linear initial decay (exponential regime)."},
    {"fig6c", 0.7, 0.08, "klnF", "ln F vs kicks; faster exponential decay."},
    {"fig7a", 0.1, 0.001, "kFN_F",
     "F_N and F vs kicks; fast F_N revivals modulated at the F recurrence frequency (beats)."},
    {"fig7b", 0.505, 0.001, "kFN", "F_N vs kicks in the chaotic regime; rapid small-amplitude "
                                   "oscillations on top of irregular drift."},
    {"fig7c", 0.505, 0.001, "kN",
     "Mean photon number vs kicks; substantial growth compared with the regular regime."},
    {"fig8", 0.0, 0.0, "entropy",
     "Spectral entropy of F vs epsilon; smooth in regular windows, rapid growth near the chaos "
     "border, elevated irregular values in deep chaos."},
};

}  // namespace

std::vector<std::string> known_figure_ids() {
    std::vector<std::string> out;
    for (const auto& f : kFigures) out.push_back(f.id);
    return out;
}

std::vector<fs::path> emit_plot_data(const fs::path& out_dir, const std::string& figure_id) {
    const FigureSpec* spec = nullptr;
    for (const auto& f : kFigures)
        if (figure_id == f.id) spec = &f;
    if (!spec) {
        std::string known;
        for (const auto& f : kFigures) known += std::string(" ") + f.id;
        throw UsageError("unknown figure id '" + figure_id + "'; valid ids:" + known);
    }
    if (!fs::exists(out_dir)) throw UsageError("output directory does not exist: " + out_dir.string());

    std::ostringstream data;
    std::string axes;
    if (std::string(spec->kind) == "entropy") {
        const fs::path src = out_dir / "entropy.csv";
        std::ifstream in(src);
        if (!in)
            throw UsageError("figure fig8 needs an entropy_sweep run first: "
                             "--mode entropy_sweep --sweep epsilon <start> <stop> <steps>");
        std::string line;
        bool header_seen = false;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            if (!header_seen) {
                header_seen = true;
                continue;
            }
            std::istringstream row(line);
            std::string eps, ent;
            std::getline(row, eps, ',');
            std::getline(row, ent, ',');
            data << eps << " " << ent << "\n";
        }
        axes = "columns: epsilon, spectral entropy";
    } else {
        auto s = find_trajectory(out_dir, spec->epsilon, spec->delta_epsilon);
        if (!s) {
            std::ostringstream msg;
            msg << "figure " << spec->id << " needs a trajectory run with epsilon="
                << format_full(spec->epsilon) << " delta_epsilon=" << format_full(spec->delta_epsilon)
                << "; run --mode trajectory --epsilon " << spec->epsilon << " --delta-eps "
                << spec->delta_epsilon << " first";
            throw UsageError(msg.str());
        }
        const std::string kind = spec->kind;
        for (std::size_t i = 0; i < s->k.size(); ++i) {
            if (kind == "kF") {
                data << s->k[i] << " " << format_full(s->f[i]) << "\n";
            } else if (kind == "k2lnF" || kind == "klnF") {
                if (s->f[i] <= 0.0) continue;
                const double x = (kind == "k2lnF")
                                     ? static_cast<double>(s->k[i]) * static_cast<double>(s->k[i])
                                     : static_cast<double>(s->k[i]);
                data << format_full(x) << " " << format_full(std::log(s->f[i])) << "\n";
            } else if (kind == "kFN_F") {
                data << s->k[i] << " " << format_full(s->f_n[i]) << " " << format_full(s->f[i])
                     << "\n";
            } else if (kind == "kFN") {
                data << s->k[i] << " " << format_full(s->f_n[i]) << "\n";
            } else if (kind == "kN") {
                data << s->k[i] << " " << format_full(s->mean_n[i]) << "\n";
            }
        }
        if (kind == "kF") axes = "columns: kick number k, fidelity F";
        else if (kind == "k2lnF") axes = "columns: k^2, ln F";
        else if (kind == "klnF") axes = "columns: k, ln F";
        else if (kind == "kFN_F") axes = "columns: k, F_N, F";
        else if (kind == "kFN") axes = "columns: k, F_N";
        else if (kind == "kN") axes = "columns: k, mean photon number";
    }

    const fs::path dat = out_dir / (figure_id + ".dat");
    const fs::path txt = out_dir / (figure_id + ".txt");
    write_text_atomic(dat, data.str());
    std::ostringstream desc;
    desc << figure_id << "\n" << axes << "\n" << spec->description << "\n";
    write_text_atomic(txt, desc.str());
    return {dat, txt};
}

}  // namespace kerrkick
