#pragma once

#include "strpend/integrator.hpp"
#include "strpend/model.hpp"

#include <vector>

namespace strpend {

/// s_p rate = ds_p / h, node rates = dq / h, omega = vee((F - F^T) / 2) / h.
Velocities reconstruct_velocities(const Configuration& g, const RelativeUpdate& f, const ModelParams& p);

/// Energy of the step (g, f): discrete kinetic energy plus the trapezoidal
/// average of the potential at g and g f. The parts sum to `total`.
struct EnergyParts {
    double total = 0.0;
    double kinetic = 0.0;
    double kinetic_rot = 0.0;  ///< (1/h^2) tr[(I - F) J_d], included in `kinetic`
    double v_gravity = 0.0;
    double v_elastic = 0.0;
};

EnergyParts total_energy(const Configuration& g, const RelativeUpdate& f, const ModelParams& p);

/// Angular momentum about the vertical axis through the guide way entrance,
/// evaluated as the discrete momentum map of L_d(g, f).
double angular_momentum_e3(const Configuration& g, const RelativeUpdate& f, const ModelParams& p);

/// (|q_{a+1} - q_a| - l) / l per element.
std::vector<double> strain_field(const Configuration& g, const ModelParams& p);

struct StepRecord {
    double t = 0.0;
    double s_p = 0.0;
    double ds_p_rate = 0.0;
    double energy_total = 0.0;
    double kinetic = 0.0;
    double kinetic_rot = 0.0;
    double v_gravity = 0.0;
    double v_elastic = 0.0;
    double pi3 = 0.0;
    double ortho_err = 0.0;
    Vec3 omega = Vec3::Zero();
    int newton_iters = 0;
    double cum_dissipation = 0.0;   ///< accumulated Carnot work
    double cum_control_work = 0.0;
};

struct Snapshot {
    double t = 0.0;
    std::vector<Vec3> node_positions;   ///< absolute, q + r_p
    std::vector<double> element_strains;
    Rotation body_frame;
    Vec3 body_com = Vec3::Zero();
};

Snapshot make_snapshot(double t, const Configuration& g, const ModelParams& p);

/// Turns step events into records and keeps the work ledger. The forcing
/// impulse applied at step k does work over the half-steps on either side,
/// so it is paired with (ds_{k-1} + ds_k) / 2. Step 0 has no preceding
/// interval and contributes nothing.
class Monitor {
public:
    explicit Monitor(const ModelParams& p) : p_(p) {}

    StepRecord observe(const StepEvent& e);

    double cum_dissipation() const noexcept { return cum_dissipation_; }
    double cum_control_work() const noexcept { return cum_control_; }

private:
    ModelParams p_;
    bool first_ = true;
    double prev_ds_ = 0.0;
    double cum_dissipation_ = 0.0;
    double cum_control_ = 0.0;
};

}  // namespace strpend
