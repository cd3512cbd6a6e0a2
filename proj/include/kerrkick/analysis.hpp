#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kerrkick/timeseries.hpp"

namespace kerrkick {

struct NormalizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RadiusTooSmallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Discrete power spectrum over the full bin set omega_j = 2 pi j / N.
struct PowerSpectrum {
    std::vector<double> frequencies;
    std::vector<double> power;
    std::vector<double> normalized;  // power / sum(power)
};

/// DFT of the raw series values (no windowing, no mean removal), as the
/// kicked dynamics is genuinely discrete. Throws NormalizationError when the
/// series is identically zero.
PowerSpectrum power_spectrum(const TimeSeries& series);

struct EntropyResult {
    double entropy = 0.0;
    int bins_used = 0;
};

/// Shannon entropy of the normalized power spectrum, 0 log 0 := 0.
/// log_base = 0 selects the natural logarithm.
EntropyResult spectral_entropy(const PowerSpectrum& spectrum, bool include_dc = true,
                               double log_base = 0.0);

enum class DecayRegime { gaussian, exponential };

struct FitWindow {
    std::size_t begin = 0;  // inclusive index into the series
    std::size_t end = 0;    // exclusive
    std::size_t size() const { return end - begin; }
};

struct DecayFit {
    DecayRegime regime = DecayRegime::gaussian;
    double slope = 0.0;      // d(ln F)/d(k^2) or d(ln F)/dk
    double intercept = 0.0;
    double r_squared = 0.0;
    FitWindow window;
};

/// Least-squares fit of ln F against k^2 (gaussian) or k (exponential).
///
/// Auto windows capture the initial decay: the gaussian window is the
/// monotone-decreasing prefix from the first sample down to F < 0.5 (the
/// quadratic regime; deeper the |cos|-like node distorts the fit), the
/// exponential window runs from the first sample below 0.9 to the first
/// below 0.1 and tolerates non-monotone fluctuations inside. Windows
/// shorter than 4 points raise InsufficientDataError; nonpositive fidelity
/// values inside the window raise std::domain_error.
DecayFit fit_decay(const TimeSeries& series, DecayRegime regime,
                   std::optional<FitWindow> window = std::nullopt);

struct LyapunovSettings {
    int embedding_dim = 4;
    int delay = 0;  // 0 = automatic (autocorrelation structure, capped at N/256)
    int theiler = 50;
    double radius_fraction = 0.1;  // neighbor radius as a fraction of the series std dev
    int fit_begin = 1;
    int fit_end = 30;
    int max_references = 600;
    int min_neighbors = 3;
    double confidence_r2 = 0.8;
};

struct LyapunovEstimate {
    double lambda_max = 0.0;  // per-kick
    int embedding_dim = 0;
    int delay = 0;
    int theiler = 0;
    int fit_begin = 0;
    int fit_end = 0;
    std::vector<double> divergence_curve;  // S(s), s = 0..fit_end
    double r_squared = 0.0;
    int references_used = 0;
    bool low_confidence = false;
};

/// Kantz-style maximal Lyapunov exponent from a scalar series: delay
/// embedding, neighbor search within a fixed radius under a Theiler
/// exclusion, and a least-squares slope of the averaged log-divergence
/// curve over [fit_begin, fit_end].
LyapunovEstimate estimate_lyapunov(const TimeSeries& series,
                                   const LyapunovSettings& settings = {});

/// Delay used by the automatic rule of estimate_lyapunov.
int auto_embedding_delay(const std::vector<double>& values);

enum class DynamicsClass { regular, quasi_periodic, chaotic, indeterminate };

/// chaotic when lambda > tol, quasi_periodic in (0, tol], regular otherwise.
/// An estimate claiming chaos with a poor divergence-curve fit is
/// indeterminate; near-zero slopes naturally come with r^2 ~ 0 and stay
/// classifiable.
DynamicsClass classify_dynamics(const LyapunovEstimate& estimate, double tol = 1e-3);

/// First local minimum of the series after index 0, capped at 10% of the
/// length: the default t_min of spectral windows (skips the initial decay).
std::size_t default_window_start(const TimeSeries& series);

/// Spectral entropy per epsilon over one common [t_min, t_max) sample window
/// (indices into each series; all series must cover the window).
std::vector<std::pair<double, EntropyResult>> entropy_vs_epsilon(
    const std::vector<std::pair<double, TimeSeries>>& sweep, std::size_t t_min, std::size_t t_max,
    bool include_dc = true, double log_base = 0.0);

void write_spectrum_csv(const PowerSpectrum& spectrum, const std::filesystem::path& path,
                        const std::vector<std::string>& metadata = {});

}  // namespace kerrkick
