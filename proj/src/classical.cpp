#include "kerrkick/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kerrkick/csv.hpp"
#include "parallel.hpp"

namespace kerrkick {

std::complex<double> classical_step(std::complex<double> alpha, double chi, double period,
                                    double epsilon) {
    const std::complex<double> shifted = alpha - std::complex<double>(0.0, epsilon);
    const double energy = std::norm(shifted);
    return std::polar(1.0, -chi * period * energy) * shifted;
}

OrbitResult classical_orbit(double chi, double period, double epsilon, long transient,
                            long samples, std::complex<double> alpha0) {
    if (transient < 0 || samples < 1)
        throw std::invalid_argument("classical_orbit: transient >= 0 and samples >= 1 required");
    OrbitResult out;
    out.energies.reserve(static_cast<std::size_t>(samples));
    std::complex<double> alpha = alpha0;
    const double div2 = kDivergenceRadius * kDivergenceRadius;
    for (long i = 0; i < transient; ++i) {
        alpha = classical_step(alpha, chi, period, epsilon);
        if (!(std::norm(alpha) < div2)) {
            out.diverged = true;
            return out;
        }
    }
    for (long i = 0; i < samples; ++i) {
        alpha = classical_step(alpha, chi, period, epsilon);
        const double energy = std::norm(alpha);
        if (!(energy < div2)) {
            out.diverged = true;
            return out;
        }
        out.energies.push_back(energy);
    }
    return out;
}

BifurcationScan bifurcation_scan(double chi, double period, double eps_lo, double eps_hi,
                                 int steps, const ScanSettings& settings) {
    if (steps < 1) throw std::invalid_argument("bifurcation_scan: steps >= 1 required");
    if (!(eps_lo <= eps_hi) || !std::isfinite(eps_lo) || !std::isfinite(eps_hi))
        throw std::invalid_argument("bifurcation_scan: bad epsilon range");
    BifurcationScan scan;
    scan.chi = chi;
    scan.period = period;
    scan.settings = settings;
    const int points = steps + 1;
    scan.epsilons.resize(points);
    scan.energies.resize(points);
    scan.diverged.assign(points, 0);
    for (int i = 0; i < points; ++i)
        scan.epsilons[i] =
            (steps == 0) ? eps_lo : eps_lo + (eps_hi - eps_lo) * static_cast<double>(i) / steps;
    detail::parallel_for(points, settings.workers, [&](int i) {
        OrbitResult orbit =
            classical_orbit(chi, period, scan.epsilons[i], settings.transient, settings.samples);
        scan.energies[i] = std::move(orbit.energies);
        scan.diverged[i] = orbit.diverged ? 1 : 0;
    });
    return scan;
}

namespace {

int cluster_count(std::vector<double> sorted, double tol) {
    std::sort(sorted.begin(), sorted.end());
    int clusters = 1;
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] - sorted[i - 1] > tol) ++clusters;
    return clusters;
}

double band_width(std::vector<double> sorted) {
    std::sort(sorted.begin(), sorted.end());
    // 1%..99% quantile span; robust against single stray samples
    const std::size_t n = sorted.size();
    const std::size_t lo = n / 100;
    const std::size_t hi = n - 1 - n / 100;
    return sorted[hi] - sorted[lo];
}

}  // namespace

WindowClass classify_window(const std::vector<double>& energies, bool diverged,
                            const ClassifySettings& settings) {
    if (diverged) return WindowClass::chaotic;
    if (static_cast<long>(energies.size()) < settings.min_samples)
        return WindowClass::indeterminate;
    if (cluster_count(energies, settings.distinct_tol) <= settings.max_period)
        return WindowClass::regular;
    if (band_width(energies) <= settings.band_tol) return WindowClass::regular;
    return WindowClass::chaotic;
}

WindowClass classify_window(const BifurcationScan& scan, double epsilon,
                            const ClassifySettings& settings) {
    if (scan.epsilons.empty()) return WindowClass::indeterminate;
    std::size_t best = 0;
    double best_gap = std::abs(scan.epsilons[0] - epsilon);
    for (std::size_t i = 1; i < scan.epsilons.size(); ++i) {
        const double gap = std::abs(scan.epsilons[i] - epsilon);
        if (gap < best_gap) {
            best = i;
            best_gap = gap;
        }
    }
    return classify_window(scan.energies[best], scan.diverged[best] != 0, settings);
}

std::vector<double> window_boundaries(const BifurcationScan& scan,
                                      const ClassifySettings& settings) {
    std::vector<double> out;
    WindowClass prev = WindowClass::indeterminate;
    for (std::size_t i = 0; i < scan.epsilons.size(); ++i) {
        WindowClass cls = classify_window(scan.energies[i], scan.diverged[i] != 0, settings);
        if (cls == WindowClass::indeterminate) cls = prev;
        if (i > 0 && prev != WindowClass::indeterminate && cls != prev)
            out.push_back(0.5 * (scan.epsilons[i - 1] + scan.epsilons[i]));
        prev = cls;
    }
    return out;
}

void write_bifurcation_csv(const BifurcationScan& scan, const std::filesystem::path& path) {
    CsvFile csv(path);
    csv.comment("mode = bifurcation");
    csv.comment("chi = " + format_full(scan.chi));
    csv.comment("period = " + format_full(scan.period));
    csv.comment("transient = " + std::to_string(scan.settings.transient));
    csv.comment("samples = " + std::to_string(scan.settings.samples));
    csv.header({"epsilon", "energy"});
    for (std::size_t i = 0; i < scan.epsilons.size(); ++i) {
        for (double e : scan.energies[i]) {
            csv.begin_row();
            csv.field(scan.epsilons[i]);
            csv.field(e);
            csv.end_row();
        }
    }
    csv.commit();
}

}  // namespace kerrkick
