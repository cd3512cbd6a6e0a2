#pragma once

#include <complex>
#include <filesystem>
#include <vector>

namespace kerrkick {

/// Classical field amplitude with its kick index.
struct ClassicalState {
    std::complex<double> alpha{0.0, 0.0};
    long k = 0;
};

/// One iteration of the classical kicked map,
///   alpha' = exp(-i chi T |alpha - i eps|^2) (alpha - i eps).
/// The exponent is purely imaginary, so |alpha'| = |alpha - i eps| exactly.
std::complex<double> classical_step(std::complex<double> alpha, double chi, double period,
                                    double epsilon);

inline constexpr double kDivergenceRadius = 1e6;

struct OrbitResult {
    std::vector<double> energies;  // |alpha|^2 samples after the transient
    bool diverged = false;
};

/// Iterate from alpha0, discard `transient` iterates, record `samples`
/// energies. On divergence (|alpha| > kDivergenceRadius) the partial record
/// is returned with the flag set.
OrbitResult classical_orbit(double chi, double period, double epsilon, long transient,
                            long samples, std::complex<double> alpha0 = {0.0, 0.0});

struct ScanSettings {
    long transient = 2000;
    long samples = 500;
    int workers = 1;
};

struct BifurcationScan {
    double chi = 1.0;
    double period = 0.0;
    std::vector<double> epsilons;
    std::vector<std::vector<double>> energies;  // per-epsilon attractor samples
    std::vector<char> diverged;                 // per-epsilon flag
    ScanSettings settings;
};

/// Per-epsilon orbits from the classical vacuum alpha0 = 0; epsilons are the
/// closed range [eps_lo, eps_hi] in `steps` even increments (steps >= 1).
BifurcationScan bifurcation_scan(double chi, double period, double eps_lo, double eps_hi,
                                 int steps, const ScanSettings& settings = {});

enum class WindowClass { regular, chaotic, indeterminate };

struct ClassifySettings {
    double distinct_tol = 1e-6;  // gap tolerance for distinct-value clustering
    int max_period = 16;         // max clusters still counted as a periodic orbit
    double band_tol = 5.0;       // max energy spread of a bounded regular orbit
    long min_samples = 32;
};

/// Regular when the samples cluster into <= max_period distinct values, or
/// when they stay confined to an energy band no wider than band_tol. The
/// vacuum orbit of this area-preserving map is quasi-periodic in regular
/// windows (it fills a thin curve, not a finite point set), so the band test
/// is what detects those windows; escape into the chaotic sea widens the
/// sampled band by orders of magnitude.
WindowClass classify_window(const std::vector<double>& energies, bool diverged,
                            const ClassifySettings& settings = {});

/// Classify the scan point nearest to epsilon.
WindowClass classify_window(const BifurcationScan& scan, double epsilon,
                            const ClassifySettings& settings = {});

/// Epsilons where the classification flips, reported as midpoints of the
/// enclosing grid interval. Indeterminate points inherit their left neighbor.
std::vector<double> window_boundaries(const BifurcationScan& scan,
                                      const ClassifySettings& settings = {});

/// Scatter CSV: columns epsilon, energy (one row per sample).
void write_bifurcation_csv(const BifurcationScan& scan, const std::filesystem::path& path);

}  // namespace kerrkick
