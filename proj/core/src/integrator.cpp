#include "strpend/integrator.hpp"

#include "strpend/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace strpend {

void NewtonSettings::validate() const {
    if (!(std::isfinite(tol) && tol > 0.0)) throw ModelError("newton.tol", "must be positive");
    if (max_iter < 1) throw ModelError("newton.max_iter", "must be at least 1");
    if (!(std::isfinite(fd_step) && fd_step > 0.0)) throw ModelError("newton.fd_step", "must be positive");
    if (jacobian_reuse < 1) throw ModelError("newton.jacobian_reuse", "must be at least 1");
}

ControlInput ControlInput::constant(double value) {
    if (!std::isfinite(value)) throw ModelError("control.value", "must be finite");
    ControlInput c;
    c.mode_ = Mode::Constant;
    c.value_ = value;
    return c;
}

ControlInput ControlInput::tabulated(std::vector<std::pair<double, double>> table) {
    if (table.empty()) throw ModelError("control.table", "must not be empty");
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (!std::isfinite(table[i].first) || !std::isfinite(table[i].second)) {
            throw ModelError("control.table", "entries must be finite");
        }
        if (i > 0 && !(table[i].first > table[i - 1].first)) {
            throw ModelError("control.table", "times must be strictly increasing");
        }
    }
    ControlInput c;
    c.mode_ = Mode::Tabulated;
    c.table_ = std::move(table);
    return c;
}

double ControlInput::at(double t) const {
    switch (mode_) {
        case Mode::None: return 0.0;
        case Mode::Constant: return value_;
        case Mode::Tabulated: break;
    }
    if (t <= table_.front().first) return table_.front().second;
    if (t >= table_.back().first) return table_.back().second;
    const auto it = std::upper_bound(table_.begin(), table_.end(), t,
                                     [](double x, const std::pair<double, double>& e) { return x < e.first; });
    const auto& [t1, u1] = *it;
    const auto& [t0, u0] = *(it - 1);
    return u0 + (u1 - u0) * (t - t0) / (t1 - t0);
}

DiscreteMomentum momentum_after(const Configuration& g, const RelativeUpdate& f, const ModelParams& p) {
    const DerivativeBundle b = derivatives_of_Ld(g, f, p);
    return {b.d_ds_p, b.d_dq, b.d_F};
}

DiscreteMomentum momentum_from_velocities(const Configuration& g, const Velocities& v, const ModelParams& p) {
    const std::size_t n = p.n_elements();
    if (v.q_rate.size() != n + 1) throw ModelError("velocities.q_rate", "expected one rate per node");
    if (!v.q_rate[0].isZero(0.0)) throw ModelError("velocities.q_rate", "pinned node must not move");

    const InertiaCoeffs c = inertia_coeffs(g.s_p, g.q, p);
    const double sd = v.s_p_rate;
    DiscreteMomentum m;
    m.s_p = (p.string.mu * g.s_p + p.reel.kappa_d) * sd;
    m.q.assign(n + 1, Vec3::Zero());
    for (std::size_t e = 0; e < n; ++e) {
        const Vec3& vi = v.q_rate[e];
        const Vec3& vj = v.q_rate[e + 1];
        m.s_p += c.m3[e] * sd + c.m23[e].dot(vj) + c.m31[e].dot(vi);
        m.q[e] += c.m1 * vi + c.m12 * vj + sd * c.m31[e];
        m.q[e + 1] += c.m2 * vj + c.m12 * vi + sd * c.m23[e];
    }
    const double mass = p.body.mass;
    const Vec3& rho = p.body.rho_c;
    const Vec3& tip = v.q_rate[n];
    m.q[n] += mass * tip + mass * (g.R * v.omega.cross(rho));
    m.body = p.body.inertia * v.omega + mass * rho.cross(g.R.matrix().transpose() * tip);
    return m;
}

double carnot_term(const Configuration& g_k, double ds_p, const ModelParams& p) {
    const double h = p.h();
    const double l = element_length(g_k.s_p, p);
    const double stretch = g_k.q[1].norm() - l;
    return -h / (2.0 * l * l) * (p.string.mu * ds_p * ds_p / (h * h) + p.string.ea) * stretch * stretch;
}

double control_term(double u_k, const ModelParams& p) {
    return p.h() * u_k / p.reel.d;
}

std::size_t unknown_size(std::size_t n_elements, ReelMode mode) {
    return 3 * n_elements + (mode == ReelMode::Free ? 4 : 3);
}

Eigen::VectorXd pack(const RelativeUpdate& f, ReelMode mode) {
    const std::size_t n = f.n_elements();
    Eigen::VectorXd x(static_cast<Eigen::Index>(unknown_size(n, mode)));
    Eigen::Index k = 0;
    if (mode == ReelMode::Free) x(k++) = f.ds_p;
    for (std::size_t i = 1; i <= n; ++i, k += 3) x.segment<3>(k) = f.dq[i];
    x.segment<3>(k) = f.c();
    return x;
}

RelativeUpdate unpack(const Eigen::VectorXd& x, std::size_t n_elements, ReelMode mode) {
    if (static_cast<std::size_t>(x.size()) != unknown_size(n_elements, mode)) {
        throw Error("unpack: unknown vector has the wrong size");
    }
    Eigen::Index k = 0;
    const double ds = mode == ReelMode::Free ? x(k++) : 0.0;
    std::vector<Vec3> dq(n_elements + 1, Vec3::Zero());
    for (std::size_t i = 1; i <= n_elements; ++i, k += 3) dq[i] = x.segment<3>(k);
    return RelativeUpdate::from_cayley(ds, std::move(dq), x.segment<3>(k));
}

Eigen::VectorXd residual_from_momentum(const Configuration& g_k, const DiscreteMomentum& p_k,
                                       const RelativeUpdate& f_trial, double u_k, const ModelParams& p,
                                       ReelMode mode) {
    const std::size_t n = p.n_elements();
    const DerivativeBundle b = derivatives_of_Ld(g_k, f_trial, p);

    Eigen::VectorXd r(static_cast<Eigen::Index>(unknown_size(n, mode)));
    Eigen::Index k = 0;
    if (mode == ReelMode::Free) {
        r(k++) = p_k.s_p - b.d_ds_p + b.d_s_p + carnot_term(g_k, f_trial.ds_p, p) + control_term(u_k, p);
    }
    for (std::size_t i = 1; i <= n; ++i, k += 3) r.segment<3>(k) = p_k.q[i] - b.d_dq[i] + b.d_q[i];
    r.segment<3>(k) = p_k.body - coadjoint_F(b.d_F, f_trial.F()) + b.d_R;
    return r;
}

Eigen::VectorXd residual(const Configuration& g_k, const RelativeUpdate& f_prev, const RelativeUpdate& f_trial,
                         double u_k, const ModelParams& p, ReelMode mode) {
    const Configuration g_prev = compose_inverse(g_k, f_prev);
    return residual_from_momentum(g_k, momentum_after(g_prev, f_prev, p), f_trial, u_k, p, mode);
}

namespace {

double inf_norm(const Eigen::VectorXd& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

}  // namespace

StepResult solve_step(const Configuration& g_k, const DiscreteMomentum& p_k, const RelativeUpdate& guess,
                      double u_k, const NewtonSettings& settings, const ModelParams& p, ReelMode mode,
                      NewtonWorkspace* workspace) {
    const std::size_t n = p.n_elements();
    NewtonWorkspace local;
    NewtonWorkspace& ws = workspace ? *workspace : local;

    StepResult out;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++out.residual_evals;
        return residual_from_momentum(g_k, p_k, unpack(x, n, mode), u_k, p, mode);
    };
    auto refresh = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& r) {
        const Eigen::Index m = x.size();
        Eigen::MatrixXd jac(m, m);
        Eigen::VectorXd xp = x;
        for (Eigen::Index j = 0; j < m; ++j) {
            const double step = settings.fd_step * std::max(1.0, std::abs(x(j)));
            xp(j) = x(j) + step;
            jac.col(j) = (eval(xp) - r) / (xp(j) - x(j));
            xp(j) = x(j);
        }
        ws.lu.compute(jac);
        ws.valid = true;
        ws.steps_since_refresh = 0;
        ++out.jacobian_evals;
    };

    RelativeUpdate start = guess;
    if (mode == ReelMode::FixedLength) start.ds_p = 0.0;
    Eigen::VectorXd x = pack(start, mode);
    Eigen::VectorXd r = eval(x);
    double norm = inf_norm(r);

    if (!ws.valid || ws.steps_since_refresh >= settings.jacobian_reuse) {
        if (norm > settings.tol) refresh(x, r);
    }
    bool fresh = ws.valid && ws.steps_since_refresh == 0 && out.jacobian_evals > 0;

    int it = 0;
    while (norm > settings.tol) {
        if (it >= settings.max_iter) {
            std::ostringstream os;
            os << "Newton iteration did not converge in " << settings.max_iter
               << " iterations (residual " << norm << ")";
            throw SolverError(os.str(), norm, it);
        }
        ++it;
        const Eigen::VectorXd x_new = x - ws.lu.solve(r);
        const Eigen::VectorXd r_new = eval(x_new);
        const double norm_new = inf_norm(r_new);
        if (!std::isfinite(norm_new)) {
            throw SolverError("Newton iteration produced a non-finite residual", norm_new, it);
        }
        const bool slow = norm_new > 0.5 * norm;
        x = x_new;
        r = r_new;
        norm = norm_new;
        if (slow && !fresh && norm > settings.tol) {
            refresh(x, r);
            fresh = true;
        } else {
            fresh = false;
        }
    }
    ++ws.steps_since_refresh;

    out.f_next = unpack(x, n, mode);
    out.iterations = it;
    out.final_residual_norm = norm;
    if (mode == ReelMode::Free) {
        out.carnot_impulse = carnot_term(g_k, out.f_next.ds_p, p);
        out.control_impulse = control_term(u_k, p);
    }
    out.carnot_work = out.carnot_impulse * out.f_next.ds_p / p.h();
    out.control_work = out.control_impulse * out.f_next.ds_p / p.h();
    return out;
}

StepResult solve_step(const Configuration& g_k, const RelativeUpdate& f_prev, double u_k,
                      const NewtonSettings& settings, const ModelParams& p, ReelMode mode) {
    const Configuration g_prev = compose_inverse(g_k, f_prev);
    return solve_step(g_k, momentum_after(g_prev, f_prev, p), f_prev, u_k, settings, p, mode);
}

RelativeUpdate initialize_update(const Configuration& g0, const Velocities& v, const ModelParams& p) {
    const std::size_t n = p.n_elements();
    if (v.q_rate.size() != n + 1 || g0.q.size() != n + 1) {
        throw ModelError("velocities.q_rate", "expected one rate per node");
    }
    if (!v.q_rate[0].isZero(0.0)) throw ModelError("velocities.q_rate", "pinned node must not move");
    const double h = p.h();
    std::vector<Vec3> dq(n + 1);
    for (std::size_t i = 0; i <= n; ++i) dq[i] = h * v.q_rate[i];
    return RelativeUpdate::from_cayley(h * v.s_p_rate, std::move(dq), 0.5 * h * v.omega);
}

void check_reel_limits(double s_p, const ModelParams& p) {
    const double upper = p.string.total_length - p.disc.n_elements * kMinElementLength;
    if (!(s_p >= p.reel.b && s_p <= upper)) {
        std::ostringstream os;
        os.precision(17);
        os << "reel limit reached: s_p = " << s_p << " outside [" << p.reel.b << ", " << upper << "]";
        throw ReelLimitError(os.str(), s_p);
    }
}

std::size_t step_count(double duration, double h, std::string* warning) {
    if (!(duration >= 0.0) || !(h > 0.0)) throw ModelError("run.duration", "must be non-negative");
    const double ratio = duration / h;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(nearest);
    if (warning) {
        std::ostringstream os;
        os << "duration/h = " << ratio << " is not an integer; rounding down";
        *warning = os.str();
    }
    return static_cast<std::size_t>(std::floor(ratio));
}

SimulationOutcome simulate(const ModelParams& p, const Configuration& g0, const Velocities& v0,
                           const SimulationSpec& spec, const StepSink& sink) {
    p.validate();
    spec.newton.validate();
    check_configuration(g0, p);
    check_reel_limits(g0.s_p, p);

    SimulationOutcome out;
    std::string warning;
    out.steps = step_count(spec.duration, p.h(), &warning);
    if (!warning.empty()) out.warnings.push_back(warning);

    Velocities v = v0;
    if (spec.mode == ReelMode::FixedLength && v.s_p_rate != 0.0) {
        out.warnings.push_back("fixed-length mode: initial s_p rate ignored");
        v.s_p_rate = 0.0;
    }

    Configuration g = g0;
    out.final_g = g;
    NewtonWorkspace ws;
    std::size_t k = 0;
    try {
        DiscreteMomentum mom = momentum_from_velocities(g, v, p);
        RelativeUpdate guess = initialize_update(g, v, p);
        for (k = 0; k <= out.steps; ++k) {
            const double t = static_cast<double>(k) * p.h();
            StepResult res = solve_step(g, mom, guess, spec.control.at(t), spec.newton, p, spec.mode, &ws);
            ++out.steps_completed;
            out.stats.total_iterations += res.iterations;
            out.stats.max_iterations = std::max(out.stats.max_iterations, res.iterations);
            out.stats.jacobian_evals += res.jacobian_evals;
            out.stats.residual_evals += res.residual_evals;
            if (sink) sink(StepEvent{k, t, g, res.f_next, res});
            if (k == out.steps) break;

            mom = momentum_after(g, res.f_next, p);
            Configuration next = compose(g, res.f_next);
            check_reel_limits(next.s_p, p);
            g = std::move(next);
            out.final_g = g;
            guess = std::move(res.f_next);
        }
    } catch (const SolverError& e) {
        out.status = SimulationOutcome::Status::SolverFailed;
        out.failure_step = k;
        out.message = e.what();
    } catch (const ReelLimitError& e) {
        out.status = SimulationOutcome::Status::ReelLimit;
        out.failure_step = k + 1;
        out.message = e.what();
    } catch (const Error& e) {
        out.status = SimulationOutcome::Status::ModelFailure;
        out.failure_step = k;
        out.message = e.what();
    }
    return out;
}

}  // namespace strpend
