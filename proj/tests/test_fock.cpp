#include <doctest.h>

#include <cmath>

#include "kerrkick/fock.hpp"
#include "oracles.hpp"

using namespace kerrkick;

namespace {

// Deterministic pseudo-random normalized states for property checks.
struct Lcg {
    std::uint64_t state;
    double next() {  // in [-1, 1)
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return 2.0 * (static_cast<double>(state >> 11) / 9007199254740992.0) - 1.0;
    }
};

FockVector random_state(int dim, std::uint64_t seed) {
    Lcg rng{seed};
    FockVector psi;
    psi.amplitudes.resize(dim);
    for (int n = 0; n < dim; ++n) psi.amplitudes[n] = Complex(rng.next(), rng.next());
    normalize(psi);
    return psi;
}

}  // namespace

TEST_CASE("make_vacuum puts all amplitude in |0>") {
    FockVector psi = make_vacuum(4);
    CHECK(psi.dim() == 4);
    CHECK(psi.amplitudes[0] == Complex(1.0, 0.0));
    for (int n = 1; n < 4; ++n) CHECK(psi.amplitudes[n] == Complex(0.0, 0.0));

    CHECK(make_vacuum(1).dim() == 1);
    CHECK(make_vacuum(1).amplitudes[0] == Complex(1.0, 0.0));
    CHECK(make_vacuum(128).norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(make_vacuum(0), std::invalid_argument);
}

TEST_CASE("kerr diagonal phases") {
    const double pi = 3.14159265358979323846;
    KerrPhaseDiagonal d = make_kerr_diagonal(1.0, pi, 8);
    CHECK(d.phases[0] == Complex(1.0, 0.0));
    CHECK(d.phases[1] == Complex(1.0, 0.0));
    CHECK(std::abs(d.phases[2] - Complex(1.0, 0.0)) < 1e-12);  // exp(-2 pi i)
    CHECK(std::abs(d.phases[3] - Complex(1.0, 0.0)) < 1e-12);  // exp(-6 pi i)

    KerrPhaseDiagonal h = make_kerr_diagonal(0.5, pi, 8);
    CHECK(std::abs(h.phases[3] - Complex(-1.0, 0.0)) < 1e-12);  // exp(-3 pi i)

    for (int n = 0; n < 8; ++n) CHECK(std::abs(std::abs(d.phases[n]) - 1.0) < 1e-14);
    CHECK_THROWS_AS(make_kerr_diagonal(1.0, pi, 0), std::invalid_argument);
}

TEST_CASE("kerr map is the identity at chi=1, T=pi") {
    // n(n-1) is always even, so every phase is exp(-2 pi i m) = 1
    const double pi = 3.14159265358979323846;
    KerrPhaseDiagonal d = make_kerr_diagonal(1.0, pi, 128);
    for (int n = 0; n < 128; ++n) CHECK(std::abs(d.phases[n] - Complex(1.0, 0.0)) < 1e-10);
}

TEST_CASE("kick matrix: identity at zero strength") {
    KickMatrix m = make_kick_matrix(0.0, 8, 4);
    CHECK(m.working_dim() == 12);
    CHECK((m.elements - Eigen::MatrixXcd::Identity(12, 12)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kick matrix: vacuum overlap element") {
    KickMatrix m = make_kick_matrix(0.1, 32, 32);
    CHECK(std::abs(m.elements(0, 0) - Complex(std::exp(-0.005), 0.0)) < 1e-12);
}

TEST_CASE("kick matrix is unitary at working dimension") {
    for (double g : {0.1, 0.5, 0.8, 1.0}) {
        KickMatrix m = make_kick_matrix(g, 32, 32);
        const int w = m.working_dim();
        const double dev =
            (m.elements.adjoint() * m.elements - Eigen::MatrixXcd::Identity(w, w))
                .cwiseAbs()
                .maxCoeff();
        CHECK(dev < 1e-12);
    }
}

TEST_CASE("kick matrix column 0 is the coherent state") {
    const double g = 0.5;
    KickMatrix m = make_kick_matrix(g, 32, 32);
    Complex phase(1.0, 0.0);
    double log_fact = 0.0;
    for (int n = 0; n < 32; ++n) {
        if (n > 0) log_fact += std::log(static_cast<double>(n));
        const double mag = std::exp(-g * g / 2.0 + n * std::log(g) - 0.5 * log_fact);
        const Complex expected = phase * mag;
        CHECK(std::abs(m.elements(n, 0) - expected) < 1e-10);
        phase *= Complex(0.0, -1.0);  // (-i g)^n builds up one factor per level
    }
}

TEST_CASE("kick matrix equals both oracles on the physical block") {
    // closed-form Laguerre elements and brute-force scaling-and-squaring
    // exponential, all built at dim + buffer and compared on the inner block
    for (double g : {0.1, 0.35, 0.8}) {
        const int dim = 32, buffer = 32;
        KickMatrix m = make_kick_matrix(g, dim, buffer);
        const Eigen::MatrixXcd block = m.physical_block();
        const Eigen::MatrixXcd closed =
            oracles::displacement_closed_form(g, dim + buffer).topLeftCorner(dim, dim);
        const Eigen::MatrixXcd expm =
            oracles::displacement_matrix_exponential(g, dim + buffer).topLeftCorner(dim, dim);
        CHECK((block - closed).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((block - expm).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((closed - expm).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("apply_kerr multiplies amplitudes by phases") {
    const double pi = 3.14159265358979323846;
    KerrPhaseDiagonal d = make_kerr_diagonal(1.0, pi, 4);
    FockVector vac = make_vacuum(4);
    FockVector out = apply_kerr(d, vac);
    CHECK((out.amplitudes - vac.amplitudes).norm() < 1e-15);

    FockVector two;  // |2>
    two.amplitudes = Eigen::VectorXcd::Zero(4);
    two.amplitudes[2] = 1.0;
    out = apply_kerr(d, two);
    CHECK(std::abs(out.amplitudes[2] - Complex(1.0, 0.0)) < 1e-12);

    KerrPhaseDiagonal ones;
    ones.phases = Eigen::VectorXcd::Ones(4);
    FockVector psi = random_state(4, 7);
    out = apply_kerr(ones, psi);
    CHECK((out.amplitudes - psi.amplitudes).norm() == 0.0);

    KerrPhaseDiagonal wrong = make_kerr_diagonal(1.0, pi, 5);
    CHECK_THROWS_AS(apply_kerr(wrong, psi), std::invalid_argument);
}

TEST_CASE("apply_matrix: identity kick and norm preservation") {
    KickMatrix id = make_kick_matrix(0.0, 16, 16);
    FockVector psi = random_state(32, 11);
    FockVector out = apply_matrix(id, psi);
    CHECK((out.amplitudes - psi.amplitudes).norm() == 0.0);

    KickMatrix m = make_kick_matrix(0.5, 32, 32);
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        FockVector s = random_state(64, seed);
        CHECK(std::abs(apply_matrix(m, s).norm() - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(apply_matrix(m, random_state(10, 3)), std::invalid_argument);
}

TEST_CASE("apply_matrix on vacuum gives coherent amplitudes") {
    KickMatrix m = make_kick_matrix(0.1, 32, 32);
    FockVector out = apply_matrix(m, make_vacuum(64));
    const double g = 0.1;
    Complex phase(1.0, 0.0);
    double log_fact = 0.0;
    for (int n = 0; n < 40; ++n) {
        if (n > 0) log_fact += std::log(static_cast<double>(n));
        const Complex expected = phase * std::exp(-g * g / 2.0 + n * std::log(g) - 0.5 * log_fact);
        CHECK(std::abs(out.amplitudes[n] - expected) < 1e-10);
        phase *= Complex(0.0, -1.0);
    }
}

TEST_CASE("repeated kick+kerr cycle conserves norm") {
    const double pi = 3.14159265358979323846;
    const int dim = 64, buffer = 32;
    KickMatrix m = make_kick_matrix(0.8, dim, buffer);
    KerrPhaseDiagonal d = make_kerr_diagonal(0.5, pi, dim + buffer);
    FockVector psi = make_vacuum(dim + buffer);
    for (int k = 0; k < 10000; ++k) psi = apply_kerr(d, apply_matrix(m, psi));
    CHECK(std::abs(psi.norm() - 1.0) < 1e-8);
}

TEST_CASE("tail_population") {
    FockVector psi;
    psi.amplitudes = Eigen::VectorXcd::Zero(8);
    psi.amplitudes[6] = Complex(0.6, 0.0);
    psi.amplitudes[7] = Complex(0.0, 0.8);
    CHECK(tail_population(psi, 6) == doctest::Approx(1.0));
    CHECK(tail_population(psi, 7) == doctest::Approx(0.64));
    CHECK(tail_population(psi, 8) == 0.0);
    CHECK(tail_population(psi, -2) == doctest::Approx(1.0));
}

TEST_CASE("system params validation") {
    SystemParams p;
    p.kicks = 10;
    CHECK_NOTHROW(p.validate());
    SystemParams bad = p;
    bad.chi = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.dim = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.buffer = -1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.delta_epsilon = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.stride = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("normalize rejects the zero vector") {
    FockVector zero;
    zero.amplitudes = Eigen::VectorXcd::Zero(4);
    CHECK_THROWS_AS(normalize(zero), std::invalid_argument);
}
