#include "kerrkick/evolution.hpp"

#include <cmath>

#include "kerrkick/csv.hpp"

namespace kerrkick {

KerrPhaseDiagonal kerr_evolution_diagonal(double chi, double period, int dim) {
    return make_kerr_diagonal(0.5 * chi, period, dim);
}

EvolutionEngine::EvolutionEngine(const SystemParams& params) : params_(params) {
    params_.validate();
    const int w = params_.working_dim();
    kerr_ = kerr_evolution_diagonal(params_.chi, params_.period, w);
    kick_u_ = make_kick_matrix(params_.epsilon, params_.dim, params_.buffer);
    kick_p_ = make_kick_matrix(params_.epsilon + params_.delta_epsilon, params_.dim, params_.buffer);
    psi_u_ = make_vacuum(w);
    psi_p_ = make_vacuum(w);
    scratch_.resize(w);
    // watch the top half of the buffer zone; with buffer = 0 watch the top
    // eighth of the space instead so the monitor never degenerates
    leak_from_ = (params_.buffer > 0) ? w - params_.buffer / 2 : w - (w + 7) / 8;
    if (leak_from_ < 1) leak_from_ = 1;
}

void EvolutionEngine::step() {
    scratch_.noalias() = kick_u_.elements * psi_u_.amplitudes;
    psi_u_.amplitudes = kerr_.phases.cwiseProduct(scratch_);
    scratch_.noalias() = kick_p_.elements * psi_p_.amplitudes;
    psi_p_.amplitudes = kerr_.phases.cwiseProduct(scratch_);
    ++k_;
    monitor_leak();
}

void EvolutionEngine::step_adjoint() {
    scratch_ = kerr_.phases.conjugate().cwiseProduct(psi_u_.amplitudes);
    psi_u_.amplitudes.noalias() = kick_u_.elements.adjoint() * scratch_;
    scratch_ = kerr_.phases.conjugate().cwiseProduct(psi_p_.amplitudes);
    psi_p_.amplitudes.noalias() = kick_p_.elements.adjoint() * scratch_;
    --k_;
    monitor_leak();
}

void EvolutionEngine::monitor_leak() {
    const double leak = std::max(tail_population(psi_u_, leak_from_),
                                 tail_population(psi_p_, leak_from_));
    if (leak > leak_max_) leak_max_ = leak;
    if (leak > kLeakThreshold) truncation_safe_ = false;
}

double EvolutionEngine::fidelity() const {
    return std::abs(psi_p_.amplitudes.dot(psi_u_.amplitudes));
}

double EvolutionEngine::fidelity_n() const {
    Complex acc(0.0, 0.0);
    const int w = psi_u_.dim();
    for (int n = 1; n < w; ++n)
        acc += static_cast<double>(n) * std::conj(psi_p_.amplitudes[n]) * psi_u_.amplitudes[n];
    return std::abs(acc);
}

double mean_photon_number(const FockVector& psi) {
    double acc = 0.0;
    for (int n = 1; n < psi.dim(); ++n)
        acc += static_cast<double>(n) * std::norm(psi.amplitudes[n]);
    return acc;
}

TrajectoryRecord run_trajectory(const SystemParams& params) {
    EvolutionEngine engine(params);
    TrajectoryRecord rec;
    rec.params = engine.params();
    const long stride = params.stride;
    const std::size_t samples = static_cast<std::size_t>(params.kicks / stride) + 1;
    for (TimeSeries* s : {&rec.fidelity, &rec.f_n, &rec.mean_photons_u}) {
        s->values.reserve(samples);
        s->t0 = 0;
        s->stride = stride;
    }
    rec.fidelity.values.push_back(engine.fidelity());
    rec.f_n.values.push_back(engine.fidelity_n());
    rec.mean_photons_u.values.push_back(mean_photon_number(engine.state_unperturbed()));
    for (long k = 1; k <= params.kicks; ++k) {
        engine.step();
        if (k % stride == 0) {
            rec.fidelity.values.push_back(engine.fidelity());
            rec.f_n.values.push_back(engine.fidelity_n());
            rec.mean_photons_u.values.push_back(mean_photon_number(engine.state_unperturbed()));
        }
    }
    rec.leak_max = engine.leak_max();
    rec.truncation_safe = engine.truncation_safe();
    return rec;
}

void write_trajectory_csv(const TrajectoryRecord& rec, const std::filesystem::path& path) {
    CsvFile csv(path);
    csv.comment("mode = trajectory");
    csv.comment_params(rec.params);
    csv.comment("leak_max = " + format_full(rec.leak_max));
    csv.comment(std::string("truncation_safe = ") + (rec.truncation_safe ? "true" : "false"));
    csv.header({"k", "F", "F_N", "mean_n"});
    for (std::size_t i = 0; i < rec.fidelity.size(); ++i) {
        csv.begin_row();
        csv.field_int(rec.fidelity.kick_at(i));
        csv.field(rec.fidelity.values[i]);
        csv.field(rec.f_n.values[i]);
        csv.field(rec.mean_photons_u.values[i]);
        csv.end_row();
    }
    csv.commit();
}

}  // namespace kerrkick
