#include "kerrkick/fock.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace kerrkick {

void SystemParams::validate() const {
    if (chi <= 0.0 || !std::isfinite(chi)) throw std::invalid_argument("chi must be > 0");
    if (period <= 0.0 || !std::isfinite(period)) throw std::invalid_argument("period must be > 0");
    if (epsilon < 0.0 || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be >= 0");
    if (delta_epsilon < 0.0 || !std::isfinite(delta_epsilon))
        throw std::invalid_argument("delta_epsilon must be >= 0");
    if (dim < 2) throw std::invalid_argument("dim must be >= 2");
    if (buffer < 0) throw std::invalid_argument("buffer must be >= 0");
    if (kicks < 0) throw std::invalid_argument("kicks must be >= 0");
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
}

FockVector make_vacuum(int dim) {
    if (dim < 1) throw std::invalid_argument("make_vacuum: dim must be >= 1");
    FockVector psi;
    psi.amplitudes = Eigen::VectorXcd::Zero(dim);
    psi.amplitudes[0] = 1.0;
    return psi;
}

void normalize(FockVector& psi) {
    const double n = psi.norm();
    if (n == 0.0 || !std::isfinite(n))
        throw std::invalid_argument("normalize: zero or non-finite state");
    psi.amplitudes /= n;
}

KerrPhaseDiagonal make_kerr_diagonal(double chi, double period, int dim) {
    if (dim < 1) throw std::invalid_argument("make_kerr_diagonal: dim must be >= 1");
    KerrPhaseDiagonal diag;
    diag.phases.resize(dim);
    for (int n = 0; n < dim; ++n) {
        const double theta = chi * period * static_cast<double>(n) * static_cast<double>(n - 1);
        diag.phases[n] = std::polar(1.0, -theta);
    }
    return diag;
}

namespace {

// Eigendecomposition of the position-like generator a^dag + a (real symmetric
// tridiagonal, off-diagonal sqrt(n)). The eigenvectors are independent of the
// kick strength, so one decomposition per working dimension serves every
// strength; cached per process.
struct GeneratorBasis {
    Eigen::VectorXd evals;
    Eigen::MatrixXd evecs;
};

const GeneratorBasis& generator_basis(int w) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GeneratorBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(w);
    if (it == cache.end()) {
        Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(w, w);
        for (int n = 0; n + 1 < w; ++n) {
            const double c = std::sqrt(static_cast<double>(n + 1));
            gen(n, n + 1) = c;
            gen(n + 1, n) = c;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gen);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("make_kick_matrix: eigendecomposition failed");
        auto basis = std::make_unique<GeneratorBasis>();
        basis->evals = solver.eigenvalues();
        basis->evecs = solver.eigenvectors();
        it = cache.emplace(w, std::move(basis)).first;
    }
    return *it->second;
}

}  // namespace

KickMatrix make_kick_matrix(double strength, int dim, int buffer) {
    if (dim < 1) throw std::invalid_argument("make_kick_matrix: dim must be >= 1");
    if (buffer < 0) throw std::invalid_argument("make_kick_matrix: buffer must be >= 0");
    if (!std::isfinite(strength)) throw std::invalid_argument("make_kick_matrix: strength not finite");

    const int w = dim + buffer;
    KickMatrix m;
    m.strength = strength;
    m.dim = dim;
    m.buffer = buffer;
    if (strength == 0.0) {
        m.elements = Eigen::MatrixXcd::Identity(w, w);
        return m;
    }
    const GeneratorBasis& basis = generator_basis(w);
    Eigen::VectorXcd phase(w);
    for (int i = 0; i < w; ++i) phase[i] = std::polar(1.0, -strength * basis.evals[i]);
    const Eigen::MatrixXcd vc = basis.evecs.cast<Complex>();
    m.elements.noalias() = vc * phase.asDiagonal() * vc.transpose();
    return m;
}

FockVector apply_kerr(const KerrPhaseDiagonal& diag, const FockVector& psi) {
    if (diag.dim() != psi.dim())
        throw std::invalid_argument("apply_kerr: dimension mismatch");
    FockVector out;
    out.amplitudes = diag.phases.cwiseProduct(psi.amplitudes);
    return out;
}

FockVector apply_matrix(const KickMatrix& m, const FockVector& psi) {
    if (m.working_dim() != psi.dim())
        throw std::invalid_argument("apply_matrix: dimension mismatch");
    FockVector out;
    out.amplitudes.noalias() = m.elements * psi.amplitudes;
    return out;
}

double tail_population(const FockVector& psi, int from_index) {
    const int d = psi.dim();
    if (from_index < 0) from_index = 0;
    if (from_index >= d) return 0.0;
    return psi.amplitudes.tail(d - from_index).squaredNorm();
}

}  // namespace kerrkick
