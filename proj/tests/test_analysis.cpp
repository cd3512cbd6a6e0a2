#include <doctest.h>

#include <cmath>

#include "kerrkick/analysis.hpp"
#include "oracles.hpp"

using namespace kerrkick;

namespace {

constexpr double kPi = 3.14159265358979323846;

TimeSeries series_of(std::vector<double> v, long t0 = 0, long stride = 1) {
    TimeSeries s;
    s.values = std::move(v);
    s.t0 = t0;
    s.stride = stride;
    return s;
}

double lcg_noise(std::uint64_t& s) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return 2.0 * (static_cast<double>(s >> 11) / 9007199254740992.0) - 1.0;
}

}  // namespace

TEST_CASE("constant series puts all power in the DC bin") {
    PowerSpectrum spec = power_spectrum(series_of(std::vector<double>(64, 3.5)));
    CHECK(spec.normalized[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t j = 1; j < spec.normalized.size(); ++j)
        CHECK(spec.normalized[j] < 1e-18);
}

TEST_CASE("cosine at a bin frequency fills exactly two bins") {
    const std::size_t n = 128, j0 = 5;
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t)
        x[t] = std::cos(2.0 * kPi * static_cast<double>(j0) * static_cast<double>(t) / n);
    PowerSpectrum spec = power_spectrum(series_of(std::move(x)));
    CHECK(spec.normalized[j0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(spec.normalized[n - j0] == doctest::Approx(0.5).epsilon(1e-9));
    for (std::size_t j = 0; j < n; ++j)
        if (j != j0 && j != n - j0) CHECK(spec.normalized[j] < 1e-18);
}

TEST_CASE("spectrum matches the brute-force DFT and Parseval") {
    std::uint64_t s = 1234;
    std::vector<double> x(129);  // odd length exercises the generic FFT path
    for (double& v : x) v = lcg_noise(s);
    PowerSpectrum spec = power_spectrum(series_of(x));
    auto brute = oracles::brute_force_dft(x);
    double sum_p = 0.0, sum_sq = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        CHECK(std::abs(spec.power[j] - std::norm(brute[j])) < 1e-9);
        sum_p += spec.power[j];
        sum_sq += x[j] * x[j];
    }
    CHECK(sum_p / static_cast<double>(x.size()) ==
          doctest::Approx(sum_sq).epsilon(1e-9));
    // frequencies are 2 pi j / N
    CHECK(spec.frequencies[1] == doctest::Approx(2.0 * kPi / 129.0));
    // normalization sums to one
    double sum_n = 0.0;
    for (double p : spec.normalized) sum_n += p;
    CHECK(sum_n == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("power_spectrum error paths") {
    CHECK_THROWS_AS(power_spectrum(series_of({1.0})), std::invalid_argument);
    CHECK_THROWS_AS(power_spectrum(series_of(std::vector<double>(16, 0.0))), NormalizationError);
}

TEST_CASE("spectral entropy of degenerate spectra") {
    // single line -> zero entropy
    PowerSpectrum spec = power_spectrum(series_of(std::vector<double>(32, 1.0)));
    EntropyResult e = spectral_entropy(spec);
    CHECK(e.entropy == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(e.bins_used == 1);

    // unit impulse -> flat spectrum -> ln N
    std::vector<double> imp(40, 0.0);
    imp[0] = 1.0;
    e = spectral_entropy(power_spectrum(series_of(std::move(imp))));
    CHECK(e.entropy == doctest::Approx(std::log(40.0)).epsilon(1e-12));
    CHECK(e.bins_used == 40);

    // two equal bins -> ln 2
    PowerSpectrum two;
    two.frequencies = {0.0, 1.0, 2.0, 3.0};
    two.power = {0.0, 4.0, 0.0, 4.0};
    two.normalized = {0.0, 0.5, 0.0, 0.5};
    e = spectral_entropy(two);
    CHECK(e.entropy == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(e.bins_used == 2);

    // base-2 logarithm turns ln 2 into 1 bit
    CHECK(spectral_entropy(two, true, 2.0).entropy == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("entropy respects the DC-exclusion switch and its bounds") {
    std::uint64_t s = 777;
    std::vector<double> x(200);
    for (double& v : x) v = 1.0 + 0.1 * lcg_noise(s);
    PowerSpectrum spec = power_spectrum(series_of(std::move(x)));
    EntropyResult with_dc = spectral_entropy(spec, true);
    EntropyResult no_dc = spectral_entropy(spec, false);
    CHECK(with_dc.bins_used == no_dc.bins_used + 1);
    for (const EntropyResult& e : {with_dc, no_dc}) {
        CHECK(e.entropy >= 0.0);
        CHECK(e.entropy <= std::log(static_cast<double>(e.bins_used)) + 1e-12);
    }
}

TEST_CASE("time-shift invariance of spectral entropy") {
    std::uint64_t s = 31;
    std::vector<double> x(300);
    for (double& v : x) v = lcg_noise(s);
    const double a = spectral_entropy(power_spectrum(series_of(x, 0))).entropy;
    const double b = spectral_entropy(power_spectrum(series_of(x, 500))).entropy;
    CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("gaussian decay fit recovers a synthetic rate exactly") {
    const double a = 1e-5;
    std::vector<double> f(400);
    for (std::size_t k = 0; k < f.size(); ++k)
        f[k] = std::exp(-a * static_cast<double>(k) * static_cast<double>(k));
    DecayFit fit = fit_decay(series_of(std::move(f)), DecayRegime::gaussian);
    CHECK(std::abs(fit.slope + a) < 1e-8);
    CHECK(fit.r_squared > 0.999999);
}

TEST_CASE("exponential decay fit recovers a synthetic rate exactly") {
    const double b = 0.01;
    std::vector<double> f(300);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = std::exp(-b * static_cast<double>(k));
    DecayFit fit = fit_decay(series_of(std::move(f)), DecayRegime::exponential);
    CHECK(std::abs(fit.slope + b) < 1e-7);
    CHECK(fit.r_squared > 0.999999);
}

TEST_CASE("decay fits tolerate multiplicative noise at the percent level") {
    std::uint64_t s = 5150;
    const double a = 2e-5, b = 0.012;
    std::vector<double> fg(300), fe(300);
    for (std::size_t k = 0; k < 300; ++k) {
        const double kk = static_cast<double>(k);
        fg[k] = std::exp(-a * kk * kk) * (1.0 + 1e-3 * lcg_noise(s));
        fe[k] = std::exp(-b * kk) * (1.0 + 1e-3 * lcg_noise(s));
    }
    DecayFit g = fit_decay(series_of(std::move(fg)), DecayRegime::gaussian);
    DecayFit e = fit_decay(series_of(std::move(fe)), DecayRegime::exponential);
    CHECK(std::abs(-g.slope / a - 1.0) < 0.02);
    CHECK(std::abs(-e.slope / b - 1.0) < 0.02);
}

TEST_CASE("decay fit error paths") {
    // a window containing a nonpositive value
    std::vector<double> f = {1.0, 0.8, 0.6, -0.1, 0.4, 0.3, 0.2, 0.15};
    CHECK_THROWS_AS(fit_decay(series_of(f), DecayRegime::exponential, FitWindow{1, 8}),
                    std::domain_error);
    // explicit window shorter than 4 points
    CHECK_THROWS_AS(fit_decay(series_of(f), DecayRegime::exponential, FitWindow{1, 3}),
                    InsufficientDataError);
    // no decay at all: the auto window never opens
    CHECK_THROWS_AS(
        fit_decay(series_of(std::vector<double>(64, 1.0)), DecayRegime::gaussian),
        InsufficientDataError);
    // out-of-range explicit window
    CHECK_THROWS_AS(fit_decay(series_of(f), DecayRegime::exponential, FitWindow{4, 20}),
                    std::invalid_argument);
}

TEST_CASE("lyapunov estimator is calibrated by the logistic map") {
    TimeSeries s = series_of(oracles::logistic_series(0.3123, 20000));
    LyapunovSettings cfg;
    cfg.embedding_dim = 2;
    cfg.delay = 1;
    cfg.theiler = 20;
    cfg.radius_fraction = 0.05;
    cfg.fit_begin = 1;
    cfg.fit_end = 3;
    cfg.max_references = 400;
    LyapunovEstimate est = estimate_lyapunov(s, cfg);
    CHECK(std::abs(est.lambda_max - std::log(2.0)) < 0.1 * std::log(2.0));
    CHECK_FALSE(est.low_confidence);
    CHECK(est.references_used > 100);
}

TEST_CASE("pure sinusoid has no exponential divergence") {
    std::vector<double> x(30000);
    for (std::size_t t = 0; t < x.size(); ++t)
        x[t] = std::sin(2.0 * kPi * static_cast<double>(t) / 97.3);
    LyapunovEstimate est = estimate_lyapunov(series_of(std::move(x)));
    CHECK(est.lambda_max <= 0.001);
    CHECK(est.delay > 1);  // the automatic delay unfolds the oscillation
}

TEST_CASE("lyapunov estimator error paths") {
    CHECK_THROWS_AS(estimate_lyapunov(series_of(std::vector<double>(5000, 1.0))),
                    RadiusTooSmallError);
    CHECK_THROWS_AS(estimate_lyapunov(series_of({1.0, 2.0, 3.0})), InsufficientDataError);
    LyapunovSettings bad;
    bad.embedding_dim = 1;
    CHECK_THROWS_AS(estimate_lyapunov(series_of(std::vector<double>(5000, 1.0)), bad),
                    std::invalid_argument);
}

TEST_CASE("classify_dynamics thresholds") {
    LyapunovEstimate est;
    est.r_squared = 0.99;
    est.lambda_max = 0.0047;
    CHECK(classify_dynamics(est) == DynamicsClass::chaotic);
    est.lambda_max = 0.0005;
    CHECK(classify_dynamics(est) == DynamicsClass::quasi_periodic);
    est.lambda_max = -0.001;
    CHECK(classify_dynamics(est) == DynamicsClass::regular);
    est.lambda_max = 0.02;
    est.low_confidence = true;
    CHECK(classify_dynamics(est) == DynamicsClass::indeterminate);
}

TEST_CASE("default_window_start finds the first dip, capped at 10%") {
    std::vector<double> v(100, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::fabs(std::cos(0.1 * i));
    // first local minimum of |cos(0.1 k)| is near k = 16, beyond the 10% cap
    CHECK(default_window_start(series_of(v)) == 10);
    std::vector<double> w = {1.0, 0.7, 0.5, 0.6, 0.8, 0.9, 1.0, 0.9, 0.8, 0.7,
                             0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.2, 0.3, 0.4, 0.5};
    CHECK(default_window_start(series_of(w)) == 2);  // capped at n/10 = 2
}

TEST_CASE("entropy_vs_epsilon slices one common window") {
    std::vector<std::pair<double, TimeSeries>> sweep;
    std::vector<double> a(100), b(100);
    for (std::size_t t = 0; t < 100; ++t) {
        a[t] = std::cos(2.0 * kPi * 10.0 * static_cast<double>(t) / 50.0);
        b[t] = 1.0;
    }
    sweep.emplace_back(0.1, series_of(a));
    sweep.emplace_back(0.2, series_of(b));
    auto out = entropy_vs_epsilon(sweep, 50, 100);
    REQUIRE(out.size() == 2);
    CHECK(out[0].first == 0.1);
    CHECK(out[0].second.entropy == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(out[1].second.entropy == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(entropy_vs_epsilon(sweep, 50, 200), std::invalid_argument);
}
