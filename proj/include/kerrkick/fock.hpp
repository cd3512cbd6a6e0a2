#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace kerrkick {

using Complex = std::complex<double>;

/// State vector over the photon-number basis |0>..|dim-1>.
struct FockVector {
    Eigen::VectorXcd amplitudes;

    int dim() const { return static_cast<int>(amplitudes.size()); }
    double norm() const { return amplitudes.norm(); }
    double squared_norm() const { return amplitudes.squaredNorm(); }
};

/// Physical parameters of one simulation run.
///
/// `dim` is the reported (physical) dimension; `buffer` extra levels are
/// appended internally so that truncation artifacts stay away from the
/// physically meaningful part of the state. Working dimension = dim + buffer.
struct SystemParams {
    double chi = 1.0;            // Kerr nonlinearity
    double period = 3.14159265358979323846;  // inter-kick time T
    double epsilon = 0.0;        // kick strength
    double delta_epsilon = 0.0;  // kick-strength perturbation
    int dim = 128;
    int buffer = 64;
    long kicks = 0;
    long stride = 1;             // output cadence in kicks

    int working_dim() const { return dim + buffer; }
    void validate() const;
};

/// Diagonal of exp(-i * chi * T * n(n-1)) over n = 0..dim-1.
struct KerrPhaseDiagonal {
    Eigen::VectorXcd phases;

    int dim() const { return static_cast<int>(phases.size()); }
};

/// Dense unitary kick operator exp(-i g (a^dag + a)) on the working space.
///
/// The matrix is built at working dimension dim + buffer by exponentiating
/// the truncated generator through its eigendecomposition, so it is unitary
/// to machine precision at any size. Its interior (the dim x dim physical
/// block, and more) matches the exact infinite-dimensional displacement
/// operator as long as the buffer is wide enough; boundary reflection
/// artifacts are confined to the top of the buffer zone and are watched by
/// the leak monitor during evolution.
struct KickMatrix {
    Eigen::MatrixXcd elements;  // (dim+buffer) x (dim+buffer)
    double strength = 0.0;
    int dim = 0;
    int buffer = 0;

    int working_dim() const { return static_cast<int>(elements.rows()); }
    /// Physical dim x dim block (the part contracts are stated on).
    Eigen::MatrixXcd physical_block() const { return elements.topLeftCorner(dim, dim); }
};

FockVector make_vacuum(int dim);

/// Normalize a state in place; throws std::invalid_argument on zero vectors.
void normalize(FockVector& psi);

KerrPhaseDiagonal make_kerr_diagonal(double chi, double period, int dim);

KickMatrix make_kick_matrix(double strength, int dim, int buffer);

FockVector apply_kerr(const KerrPhaseDiagonal& diag, const FockVector& psi);

FockVector apply_matrix(const KickMatrix& m, const FockVector& psi);

/// Population in basis states with index >= from_index.
double tail_population(const FockVector& psi, int from_index);

/// Leak threshold above which a run is flagged truncation-unsafe.
inline constexpr double kLeakThreshold = 1e-10;

}  // namespace kerrkick
