#include "kerrkick/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>

#include "kerrkick/csv.hpp"

namespace kerrkick {

namespace {

constexpr double kPi = 3.14159265358979323846;

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& fftw_mutex() {
    static std::mutex mu;
    return mu;
}

struct FftwBuffer {
    fftw_complex* data = nullptr;
    explicit FftwBuffer(std::size_t n) {
        data = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        if (!data) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LinearFit fit;
    fit.slope = (sxx > 0) ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

}  // namespace

PowerSpectrum power_spectrum(const TimeSeries& series) {
    const std::size_t n = series.size();
    if (n < 2) throw std::invalid_argument("power_spectrum: need at least 2 samples");
    for (double v : series.values)
        if (!std::isfinite(v)) throw std::invalid_argument("power_spectrum: non-finite sample");

    FftwBuffer in(n), out(n);
    for (std::size_t i = 0; i < n; ++i) {
        in.data[i][0] = series.values[i];
        in.data[i][1] = 0.0;
    }
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_plan plan =
            fftw_plan_dft_1d(static_cast<int>(n), in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
        if (!plan) throw std::runtime_error("power_spectrum: FFTW plan failed");
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }

    PowerSpectrum spec;
    spec.frequencies.resize(n);
    spec.power.resize(n);
    spec.normalized.resize(n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        spec.frequencies[j] = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
        spec.power[j] = out.data[j][0] * out.data[j][0] + out.data[j][1] * out.data[j][1];
        total += spec.power[j];
    }
    if (total <= 0.0) throw NormalizationError("power_spectrum: all-zero series");
    for (std::size_t j = 0; j < n; ++j) spec.normalized[j] = spec.power[j] / total;
    return spec;
}

EntropyResult spectral_entropy(const PowerSpectrum& spectrum, bool include_dc, double log_base) {
    EntropyResult out;
    const std::size_t begin = include_dc ? 0 : 1;
    double weight = 0.0;
    for (std::size_t j = begin; j < spectrum.normalized.size(); ++j) weight += spectrum.normalized[j];
    if (weight <= 0.0) throw NormalizationError("spectral_entropy: empty spectrum");
    double acc = 0.0;
    for (std::size_t j = begin; j < spectrum.normalized.size(); ++j) {
        const double p = spectrum.normalized[j] / weight;
        if (p > 0.0) {
            acc -= p * std::log(p);
            ++out.bins_used;
        }
    }
    if (log_base > 0.0 && log_base != 1.0) acc /= std::log(log_base);
    out.entropy = acc;
    return out;
}

namespace {

FitWindow auto_fit_window(const std::vector<double>& f, DecayRegime regime) {
    const std::size_t n = f.size();
    if (regime == DecayRegime::gaussian) {
        // monotone-decreasing prefix, stopping below the quadratic regime
        std::size_t end = 1;
        while (end < n && f[end] < f[end - 1] && f[end] > 0.0) {
            ++end;
            if (f[end - 1] < 0.5) break;
        }
        return {1, end};
    }
    std::size_t begin = 1;
    while (begin < n && f[begin] >= 0.9) ++begin;
    std::size_t end = begin;
    while (end < n && f[end] >= 0.1) ++end;
    return {begin, end};
}

}  // namespace

DecayFit fit_decay(const TimeSeries& series, DecayRegime regime, std::optional<FitWindow> window) {
    const std::size_t n = series.size();
    if (n < 2) throw InsufficientDataError("fit_decay: need at least 2 samples");
    FitWindow win = window ? *window : auto_fit_window(series.values, regime);
    if (window && (win.end > n || win.begin >= win.end))
        throw std::invalid_argument("fit_decay: window out of range");
    const std::size_t min_points = window ? 4 : 8;
    if (win.begin >= win.end || win.size() < min_points)
        throw InsufficientDataError("fit_decay: window shorter than " + std::to_string(min_points) +
                                    " points");
    std::vector<double> x(win.size()), y(win.size());
    for (std::size_t i = win.begin; i < win.end; ++i) {
        const double f = series.values[i];
        if (f <= 0.0) throw std::domain_error("fit_decay: nonpositive fidelity in window");
        const double k = static_cast<double>(series.kick_at(i));
        x[i - win.begin] = (regime == DecayRegime::gaussian) ? k * k : k;
        y[i - win.begin] = std::log(f);
    }
    const LinearFit fit = least_squares(x, y);
    DecayFit out;
    out.regime = regime;
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    out.r_squared = fit.r_squared;
    out.window = win;
    return out;
}

int auto_embedding_delay(const std::vector<double>& values) {
    const long n = static_cast<long>(values.size());
    const long cap = std::max<long>(1, n / 256);
    const long max_lag = std::min<long>(n / 8, 4 * cap);
    if (max_lag < 2) return 1;
    double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    std::vector<double> acf(max_lag + 1, 0.0);
    double c0 = 0.0;
    for (long i = 0; i < n; ++i) c0 += (values[i] - mean) * (values[i] - mean);
    if (c0 <= 0.0) return 1;
    for (long lag = 0; lag <= max_lag; ++lag) {
        double c = 0.0;
        for (long i = 0; i + lag < n; ++i) c += (values[i] - mean) * (values[i + lag] - mean);
        acf[lag] = c / c0;
    }
    // smoothed curve for minimum detection; raw curve for the zero crossing
    const long h = 2;
    std::vector<double> smooth(acf.size());
    for (long i = 0; i <= max_lag; ++i) {
        const long lo = std::max<long>(0, i - h), hi = std::min<long>(max_lag, i + h);
        double s = 0.0;
        for (long j = lo; j <= hi; ++j) s += acf[j];
        smooth[i] = s / static_cast<double>(hi - lo + 1);
    }
    for (long lag = 1; lag < max_lag - h; ++lag) {
        if (lag >= cap) return static_cast<int>(cap);
        if (acf[lag] <= 0.0) return static_cast<int>(lag);
        if (lag > h && smooth[lag] < smooth[lag - 1] && smooth[lag] <= smooth[lag + 1])
            return static_cast<int>(lag);
    }
    return static_cast<int>(cap);
}

LyapunovEstimate estimate_lyapunov(const TimeSeries& series, const LyapunovSettings& settings) {
    const long n = static_cast<long>(series.size());
    const int m = settings.embedding_dim;
    if (m < 2) throw std::invalid_argument("estimate_lyapunov: embedding_dim >= 2 required");
    if (settings.fit_begin < 0 || settings.fit_end <= settings.fit_begin)
        throw std::invalid_argument("estimate_lyapunov: bad fit range");
    const std::vector<double>& x = series.values;
    const int tau = (settings.delay > 0) ? settings.delay : auto_embedding_delay(x);
    const int smax = settings.fit_end;
    const long span = static_cast<long>(m - 1) * tau;
    const long points = n - span - smax;  // embedded vectors whose futures stay in range
    if (points < settings.theiler + 64)
        throw InsufficientDataError("estimate_lyapunov: series too short for these settings");

    double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    const double radius = settings.radius_fraction * std::sqrt(var / n);
    if (!(radius > 0.0)) throw RadiusTooSmallError("estimate_lyapunov: zero-variance series");

    const int n_ref = std::min<long>(settings.max_references, points);
    std::vector<double> sum_log(smax + 1, 0.0);
    std::vector<long> count(smax + 1, 0);
    std::vector<long> neighbors;
    int used = 0;
    for (int r = 0; r < n_ref; ++r) {
        const long i = (n_ref == 1) ? 0 : (points - 1) * static_cast<long>(r) / (n_ref - 1);
        neighbors.clear();
        for (long j = 0; j < points; ++j) {
            if (std::labs(j - i) <= settings.theiler) continue;
            double d = 0.0;
            for (int c = 0; c < m; ++c) {
                const double diff = std::abs(x[i + static_cast<long>(c) * tau] -
                                             x[j + static_cast<long>(c) * tau]);
                if (diff > d) d = diff;
                if (d > radius) break;
            }
            if (d <= radius) neighbors.push_back(j);
        }
        if (static_cast<int>(neighbors.size()) < settings.min_neighbors) continue;
        ++used;
        for (int s = 0; s <= smax; ++s) {
            double dist = 0.0;
            for (long j : neighbors) dist += std::abs(x[j + span + s] - x[i + span + s]);
            dist /= static_cast<double>(neighbors.size());
            if (dist > 0.0) {
                sum_log[s] += std::log(dist);
                ++count[s];
            }
        }
    }
    if (used == 0)
        throw RadiusTooSmallError("estimate_lyapunov: no reference point has enough neighbors");

    LyapunovEstimate est;
    est.embedding_dim = m;
    est.delay = tau;
    est.theiler = settings.theiler;
    est.fit_begin = settings.fit_begin;
    est.fit_end = settings.fit_end;
    est.references_used = used;
    est.divergence_curve.resize(smax + 1);
    for (int s = 0; s <= smax; ++s)
        est.divergence_curve[s] = (count[s] > 0) ? sum_log[s] / count[s] : 0.0;

    std::vector<double> xs, ys;
    for (int s = settings.fit_begin; s <= settings.fit_end; ++s) {
        xs.push_back(static_cast<double>(s));
        ys.push_back(est.divergence_curve[s]);
    }
    const LinearFit fit = least_squares(xs, ys);
    est.lambda_max = fit.slope;
    est.r_squared = fit.r_squared;
    est.low_confidence = fit.r_squared < settings.confidence_r2;
    return est;
}

DynamicsClass classify_dynamics(const LyapunovEstimate& estimate, double tol) {
    if (estimate.lambda_max > tol && estimate.low_confidence) return DynamicsClass::indeterminate;
    if (estimate.lambda_max > tol) return DynamicsClass::chaotic;
    if (estimate.lambda_max > 0.0) return DynamicsClass::quasi_periodic;
    return DynamicsClass::regular;
}

std::size_t default_window_start(const TimeSeries& series) {
    const std::size_t n = series.size();
    if (n < 3) return 0;
    const std::size_t cap = n / 10;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (k >= cap) return cap;
        if (series.values[k] < series.values[k - 1] && series.values[k] <= series.values[k + 1])
            return k;
    }
    return cap;
}

std::vector<std::pair<double, EntropyResult>> entropy_vs_epsilon(
    const std::vector<std::pair<double, TimeSeries>>& sweep, std::size_t t_min, std::size_t t_max,
    bool include_dc, double log_base) {
    std::vector<std::pair<double, EntropyResult>> out;
    out.reserve(sweep.size());
    for (const auto& [eps, series] : sweep) {
        if (t_max > series.size() || t_min >= t_max)
            throw std::invalid_argument("entropy_vs_epsilon: window outside series");
        TimeSeries windowed;
        windowed.values.assign(series.values.begin() + t_min, series.values.begin() + t_max);
        windowed.t0 = series.kick_at(t_min);
        windowed.stride = series.stride;
        out.emplace_back(eps, spectral_entropy(power_spectrum(windowed), include_dc, log_base));
    }
    return out;
}

void write_spectrum_csv(const PowerSpectrum& spectrum, const std::filesystem::path& path,
                        const std::vector<std::string>& metadata) {
    CsvFile csv(path);
    for (const auto& line : metadata) csv.comment(line);
    csv.header({"omega", "power", "normalized"});
    for (std::size_t j = 0; j < spectrum.frequencies.size(); ++j) {
        csv.begin_row();
        csv.field(spectrum.frequencies[j]);
        csv.field(spectrum.power[j]);
        csv.field(spectrum.normalized[j]);
        csv.end_row();
    }
    csv.commit();
}

}  // namespace kerrkick
