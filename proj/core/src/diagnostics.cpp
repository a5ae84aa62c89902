#include "strpend/diagnostics.hpp"

namespace strpend {

Velocities reconstruct_velocities(const Configuration& g, const RelativeUpdate& f, const ModelParams& p) {
    (void)g;
    const double h = p.h();
    Velocities v;
    v.s_p_rate = f.ds_p / h;
    v.q_rate.resize(f.dq.size());
    for (std::size_t i = 0; i < f.dq.size(); ++i) v.q_rate[i] = f.dq[i] / h;
    const Mat3& F = f.F().matrix();
    v.omega = Vec3(F(2, 1) - F(1, 2), F(0, 2) - F(2, 0), F(1, 0) - F(0, 1)) / (2.0 * h);
    return v;
}

EnergyParts total_energy(const Configuration& g, const RelativeUpdate& f, const ModelParams& p) {
    const double h = p.h();
    const PotentialParts now = potential(g, p);
    const PotentialParts next = potential(compose(g, f), p);
    EnergyParts e;
    e.kinetic = kinetic_total(g, f, p);
    e.kinetic_rot = ((Mat3::Identity() - f.F().matrix()) * nonstandard_inertia(p.body.inertia)).trace() / (h * h);
    e.v_gravity = 0.5 * (now.gravity() + next.gravity());
    e.v_elastic = 0.5 * (now.string_elastic + next.string_elastic);
    e.total = e.kinetic + e.v_gravity + e.v_elastic;
    return e;
}

double angular_momentum_e3(const Configuration& g, const RelativeUpdate& f, const ModelParams& p) {
    const DerivativeBundle b = derivatives_of_Ld(g, f, p);
    const Configuration next = compose(g, f);
    Vec3 total = next.R * b.d_F;
    for (std::size_t i = 0; i < next.q.size(); ++i) total += next.q[i].cross(b.d_dq[i]);
    return total.dot(kDown);
}

std::vector<double> strain_field(const Configuration& g, const ModelParams& p) {
    const double l = element_length(g.s_p, p);
    std::vector<double> s(p.n_elements());
    for (std::size_t e = 0; e < s.size(); ++e) s[e] = ((g.q[e + 1] - g.q[e]).norm() - l) / l;
    return s;
}

Snapshot make_snapshot(double t, const Configuration& g, const ModelParams& p) {
    Snapshot s;
    s.t = t;
    s.node_positions.reserve(g.q.size());
    for (const auto& q : g.q) s.node_positions.push_back(q + p.env.r_p);
    s.element_strains = strain_field(g, p);
    s.body_frame = g.R;
    s.body_com = p.env.r_p + g.q.back() + g.R * p.body.rho_c;
    return s;
}

StepRecord Monitor::observe(const StepEvent& e) {
    const double h = p_.h();
    const double ds = e.f.ds_p;
    if (!first_) {
        const double mean_rate = 0.5 * (prev_ds_ + ds) / h;
        cum_dissipation_ += e.result.carnot_impulse * mean_rate;
        cum_control_ += e.result.control_impulse * mean_rate;
    }
    first_ = false;
    prev_ds_ = ds;

    const EnergyParts en = total_energy(e.g, e.f, p_);
    const Velocities v = reconstruct_velocities(e.g, e.f, p_);
    StepRecord r;
    r.t = e.t;
    r.s_p = e.g.s_p;
    r.ds_p_rate = v.s_p_rate;
    r.energy_total = en.total;
    r.kinetic = en.kinetic;
    r.kinetic_rot = en.kinetic_rot;
    r.v_gravity = en.v_gravity;
    r.v_elastic = en.v_elastic;
    r.pi3 = angular_momentum_e3(e.g, e.f, p_);
    r.ortho_err = orthogonality_error(e.g.R.matrix());
    r.omega = v.omega;
    r.newton_iters = e.result.iterations;
    r.cum_dissipation = cum_dissipation_;
    r.cum_control_work = cum_control_;
    return r;
}

}  // namespace strpend
