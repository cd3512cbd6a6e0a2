#pragma once

#include <filesystem>

#include "kerrkick/fock.hpp"
#include "kerrkick/timeseries.hpp"

namespace kerrkick {

/// Kerr free-evolution phases over one inter-kick period.
///
/// The generator is H_NL = (chi/2) (a^dag)^2 a^2 = (chi/2) n(n-1), so the
/// accumulated phase over time T is (chi T / 2) n(n-1). Expressed through
/// make_kerr_diagonal this is the diagonal for chi/2. The c-number recurrence
/// of the classical map follows from exactly this generator, which fixes the
/// factor (see classical.hpp).
KerrPhaseDiagonal kerr_evolution_diagonal(double chi, double period, int dim);

/// Stroboscopic propagator for the unperturbed / perturbed state pair.
///
/// One step applies the kick first, then the Kerr free evolution. Observables
/// are sampled right after full steps; that sequence coincides with sampling
/// "just before the next pulse".
class EvolutionEngine {
  public:
    explicit EvolutionEngine(const SystemParams& params);

    void step();
    /// Undo one step (adjoint operators in reversed order).
    void step_adjoint();

    /// |<psi_p | psi_u>|, in [0, 1].
    double fidelity() const;
    /// |<psi_p | n_hat | psi_u>|.
    double fidelity_n() const;

    const SystemParams& params() const { return params_; }
    long kick_count() const { return k_; }
    const FockVector& state_unperturbed() const { return psi_u_; }
    const FockVector& state_perturbed() const { return psi_p_; }
    const KickMatrix& kick_unperturbed() const { return kick_u_; }
    const KickMatrix& kick_perturbed() const { return kick_p_; }
    const KerrPhaseDiagonal& kerr() const { return kerr_; }

    double leak_max() const { return leak_max_; }
    bool truncation_safe() const { return truncation_safe_; }

  private:
    void monitor_leak();

    SystemParams params_;
    KerrPhaseDiagonal kerr_;
    KickMatrix kick_u_;
    KickMatrix kick_p_;
    FockVector psi_u_;
    FockVector psi_p_;
    Eigen::VectorXcd scratch_;
    long k_ = 0;
    int leak_from_ = 0;
    double leak_max_ = 0.0;
    bool truncation_safe_ = true;
};

double mean_photon_number(const FockVector& psi);

/// Full observable record of one run; series share t0 = 0 and the run stride.
struct TrajectoryRecord {
    SystemParams params;
    TimeSeries fidelity;
    TimeSeries f_n;
    TimeSeries mean_photons_u;
    double leak_max = 0.0;
    bool truncation_safe = true;
};

/// Deterministic: identical params give bit-identical records.
TrajectoryRecord run_trajectory(const SystemParams& params);

/// CSV with `#`-prefixed parameter echo; columns k, F, F_N, mean_n.
/// Written atomically (temp file + rename).
void write_trajectory_csv(const TrajectoryRecord& record, const std::filesystem::path& path);

}  // namespace kerrkick
