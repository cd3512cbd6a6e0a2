#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "kerrkick/runner.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

int run(int argc, char** argv) {
    CLI::App app{"kerrkick: pulse-kicked Kerr oscillator simulator and chaos diagnostics"};
    app.set_config("--config", "", "flat key=value config file; flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);

    kerrkick::RunConfig config;
    std::string mode_name;
    std::string figure_id;
    std::string format_name = "csv";
    std::string regime_name = "gaussian";
    std::vector<std::string> sweep_args;

    app.add_option("--mode", mode_name,
                   "trajectory | bifurcation | entropy_sweep | lyapunov | decay_fit | spectrum");
    app.add_option("--figure", figure_id,
                   "emit plot data for a figure panel from runs already in --out");
    app.add_option("--epsilon", config.system.epsilon, "kick strength");
    app.add_option("--delta-eps", config.system.delta_epsilon, "kick-strength perturbation");
    app.add_option("--chi", config.system.chi, "Kerr nonlinearity")->capture_default_str();
    app.add_option("--period", config.system.period, "inter-kick time T")->capture_default_str();
    app.add_option("--dim", config.system.dim, "truncation dimension")->capture_default_str();
    app.add_option("--buffer", config.system.buffer, "extra working levels")->capture_default_str();
    app.add_option("--kicks", config.system.kicks, "number of map iterations");
    app.add_option("--stride", config.system.stride, "output cadence in kicks")
        ->capture_default_str();
    app.add_option("--sweep", sweep_args, "<name> <start> <stop> <steps>")->expected(4);
    app.add_option("--workers", config.workers, "parallel workers for sweeps")
        ->capture_default_str();
    app.add_option("--out", config.out_dir, "output directory")->capture_default_str();
    app.add_option("--format", format_name, "csv | json")->capture_default_str();

    app.add_option("--analysis.tmin", config.analysis.t_min,
                   "first sample of analysis windows (-1: auto)");
    app.add_option("--analysis.tmax", config.analysis.t_max,
                   "one past the last sample of analysis windows (-1: series end)");
    app.add_flag("--analysis.exclude-dc{false},!--analysis.include-dc", config.analysis.include_dc,
                 "drop the omega=0 bin from spectral entropy");
    app.add_option("--analysis.log-base", config.analysis.log_base,
                   "entropy logarithm base (0: natural)");
    app.add_option("--analysis.regime", regime_name, "decay-fit regime: gaussian | exponential");
    app.add_option("--analysis.embedding-dim", config.analysis.lyapunov.embedding_dim,
                   "delay-embedding dimension")
        ->capture_default_str();
    app.add_option("--analysis.delay", config.analysis.lyapunov.delay,
                   "embedding delay (0: automatic)");
    app.add_option("--analysis.theiler", config.analysis.lyapunov.theiler,
                   "temporal neighbor exclusion")
        ->capture_default_str();
    app.add_option("--analysis.radius-frac", config.analysis.lyapunov.radius_fraction,
                   "neighbor radius as a fraction of the series std dev")
        ->capture_default_str();
    app.add_option("--analysis.fit-begin", config.analysis.lyapunov.fit_begin,
                   "divergence-curve fit start")
        ->capture_default_str();
    app.add_option("--analysis.fit-end", config.analysis.lyapunov.fit_end,
                   "divergence-curve fit end")
        ->capture_default_str();
    app.add_option("--analysis.references", config.analysis.lyapunov.max_references,
                   "max reference points")
        ->capture_default_str();
    app.add_option("--analysis.min-neighbors", config.analysis.lyapunov.min_neighbors,
                   "minimum neighbors per reference")
        ->capture_default_str();
    app.add_option("--analysis.distinct-tol", config.analysis.classify.distinct_tol,
                   "clustering tolerance for window classification")
        ->capture_default_str();
    app.add_option("--analysis.max-period", config.analysis.classify.max_period,
                   "max clusters counted as periodic")
        ->capture_default_str();
    app.add_option("--analysis.band-tol", config.analysis.classify.band_tol,
                   "max energy band width of a regular orbit")
        ->capture_default_str();
    app.add_option("--analysis.transient", config.analysis.transient,
                   "discarded classical iterates")
        ->capture_default_str();
    app.add_option("--analysis.samples", config.analysis.samples,
                   "recorded classical samples per epsilon")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (format_name == "csv") config.format = kerrkick::OutputFormat::csv;
        else if (format_name == "json") config.format = kerrkick::OutputFormat::json;
        else throw kerrkick::UsageError("--format must be csv or json");

        if (regime_name == "gaussian") config.analysis.regime = kerrkick::DecayRegime::gaussian;
        else if (regime_name == "exponential")
            config.analysis.regime = kerrkick::DecayRegime::exponential;
        else throw kerrkick::UsageError("--analysis.regime must be gaussian or exponential");

        if (!sweep_args.empty()) {
            kerrkick::SweepSpec sweep;
            sweep.name = sweep_args[0];
            try {
                sweep.start = std::stod(sweep_args[1]);
                sweep.stop = std::stod(sweep_args[2]);
                sweep.steps = std::stoi(sweep_args[3]);
            } catch (const std::exception&) {
                throw kerrkick::UsageError("--sweep expects <name> <start> <stop> <steps>");
            }
            config.sweep = sweep;
        }

        if (!figure_id.empty()) {
            if (!mode_name.empty())
                throw kerrkick::UsageError("--figure and --mode are mutually exclusive");
            for (const auto& path : kerrkick::emit_plot_data(config.out_dir, figure_id))
                std::cout << path.string() << "\n";
            return 0;
        }

        if (mode_name.empty())
            throw kerrkick::UsageError("--mode is required (or --figure to emit plot data)");
        auto mode = kerrkick::parse_run_mode(mode_name);
        if (!mode) throw kerrkick::UsageError("unknown mode: " + mode_name);
        config.mode = *mode;

        kerrkick::RunManifest manifest = kerrkick::execute(config);
        std::cout << "mode " << manifest.mode << ": " << manifest.status << ", "
                  << manifest.artifacts.size() << " artifact(s) in " << config.out_dir.string()
                  << " (" << manifest.wall_seconds << " s)\n";
        if (manifest.idempotent_skip)
            std::cout << "outputs already up to date for this config hash; skipped recompute\n";
        if (manifest.status == "partial") {
            for (const auto& a : manifest.artifacts)
                if (a.status != "ok") std::cerr << a.file << ": " << a.status << "\n";
            return kExitNumerical;
        }
        return 0;
    } catch (const kerrkick::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const kerrkick::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
