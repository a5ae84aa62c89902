#pragma once

#include "strpend/model.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace strpend {

/// Whether s_p is an unknown (free reel) or locked at its initial value.
enum class ReelMode { Free, FixedLength };

struct NewtonSettings {
    double tol = 1e-10;       ///< residual infinity norm
    int max_iter = 50;
    double fd_step = 1e-7;    ///< relative Jacobian step, scaled by max(1, |x_j|)
    int jacobian_reuse = 1;   ///< steps between Jacobian refreshes

    void validate() const;
};

/// Drum control moment u(t) [N m].
class ControlInput {
public:
    enum class Mode { None, Constant, Tabulated };

    ControlInput() = default;
    static ControlInput none() { return {}; }
    static ControlInput constant(double value);
    /// Piecewise-linear in t, held constant outside the table.
    /// Times must be strictly increasing and every entry finite.
    static ControlInput tabulated(std::vector<std::pair<double, double>> table);

    Mode mode() const noexcept { return mode_; }
    double value() const noexcept { return value_; }
    const std::vector<std::pair<double, double>>& table() const noexcept { return table_; }

    double at(double t) const;

    friend bool operator==(const ControlInput&, const ControlInput&) = default;

private:
    Mode mode_ = Mode::None;
    double value_ = 0.0;
    std::vector<std::pair<double, double>> table_;
};

/// Continuous-time rates used to start a run.
struct Velocities {
    double s_p_rate = 0.0;
    std::vector<Vec3> q_rate;   ///< q_rate[0] must be zero
    Vec3 omega = Vec3::Zero();  ///< body angular velocity, body frame
};

/// Conjugate momenta carried from one step to the next. `body` is in the body frame.
struct DiscreteMomentum {
    double s_p = 0.0;
    std::vector<Vec3> q;
    Vec3 body = Vec3::Zero();
};

/// Momentum at g f, i.e. D_f L_d(g, f).
DiscreteMomentum momentum_after(const Configuration& g, const RelativeUpdate& f, const ModelParams& p);

/// Legendre transform of the continuous Lagrangian whose trapezoidal rule is L_d.
DiscreteMomentum momentum_from_velocities(const Configuration& g, const Velocities& v, const ModelParams& p);

/// Q_d = -(h / 2l^2) (mu ds_p^2 / h^2 + EA) (|q_2| - l)^2. Always <= 0.
double carnot_term(const Configuration& g_k, double ds_p, const ModelParams& p);

/// u_d = h u / d.
double control_term(double u_k, const ModelParams& p);

/// Number of unknowns: 3N + 4, or 3N + 3 with the reel locked.
std::size_t unknown_size(std::size_t n_elements, ReelMode mode);

/// X = [ds_p; dq_2 .. dq_{N+1}; c]. ds_p is absent in FixedLength mode.
Eigen::VectorXd pack(const RelativeUpdate& f, ReelMode mode);
RelativeUpdate unpack(const Eigen::VectorXd& x, std::size_t n_elements, ReelMode mode);

/// Discrete Euler-Lagrange residual at g_k for the trial update, given the
/// incoming momentum. Rows follow the unknown packing: [s_p; nodes 2..N+1; attitude].
Eigen::VectorXd residual_from_momentum(const Configuration& g_k, const DiscreteMomentum& p_k,
                                       const RelativeUpdate& f_trial, double u_k, const ModelParams& p,
                                       ReelMode mode = ReelMode::Free);

/// Same, with the incoming momentum taken from L_d(g_k f_prev^{-1}, f_prev).
Eigen::VectorXd residual(const Configuration& g_k, const RelativeUpdate& f_prev, const RelativeUpdate& f_trial,
                         double u_k, const ModelParams& p, ReelMode mode = ReelMode::Free);

struct StepResult {
    RelativeUpdate f_next;
    int iterations = 0;
    double final_residual_norm = 0.0;
    double carnot_impulse = 0.0;   ///< Q_d
    double control_impulse = 0.0;  ///< u_d
    double carnot_work = 0.0;      ///< Q_d ds_p / h
    double control_work = 0.0;     ///< u_d ds_p / h
    int jacobian_evals = 0;
    int residual_evals = 0;
};

/// Cached factorization for modified Newton across steps. One per simulation.
struct NewtonWorkspace {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    bool valid = false;
    int steps_since_refresh = 0;
};

/// Solves for f_k given the incoming momentum; `guess` seeds Newton.
/// Throws SolverError on non-convergence.
StepResult solve_step(const Configuration& g_k, const DiscreteMomentum& p_k, const RelativeUpdate& guess,
                      double u_k, const NewtonSettings& settings, const ModelParams& p,
                      ReelMode mode = ReelMode::Free, NewtonWorkspace* workspace = nullptr);

/// Warm-started from f_prev, with momentum from L_d(g_k f_prev^{-1}, f_prev).
StepResult solve_step(const Configuration& g_k, const RelativeUpdate& f_prev, double u_k,
                      const NewtonSettings& settings, const ModelParams& p, ReelMode mode = ReelMode::Free);

/// ds_p = h s_p_rate, dq = h q_rate, F = cayley(h omega / 2).
/// Throws ModelError if the pinned node has a velocity.
RelativeUpdate initialize_update(const Configuration& g0, const Velocities& v, const ModelParams& p);

/// Throws ReelLimitError unless b <= s_p <= L - N * kMinElementLength.
inline constexpr double kMinElementLength = 1e-6;
void check_reel_limits(double s_p, const ModelParams& p);

struct SimulationSpec {
    double duration = 0.0;
    ReelMode mode = ReelMode::Free;
    ControlInput control;
    NewtonSettings newton;
};

/// Emitted once per solved step with the state (g_k, f_k) at t_k = k h.
struct StepEvent {
    std::size_t step = 0;
    double t = 0.0;
    const Configuration& g;
    const RelativeUpdate& f;
    const StepResult& result;
};

using StepSink = std::function<void(const StepEvent&)>;

struct NewtonStats {
    long long total_iterations = 0;
    int max_iterations = 0;
    long long jacobian_evals = 0;
    long long residual_evals = 0;
};

struct SimulationOutcome {
    enum class Status { Completed, SolverFailed, ReelLimit, ModelFailure };

    Status status = Status::Completed;
    std::size_t steps = 0;            ///< requested number of steps
    std::size_t steps_completed = 0;  ///< solved updates
    std::size_t failure_step = 0;     ///< meaningful unless Completed
    Configuration final_g;            ///< last configuration reached
    std::string message;
    std::vector<std::string> warnings;
    NewtonStats stats;

    bool ok() const { return status == Status::Completed; }
};

/// Number of steps for a duration; warns through `warning` when duration / h is not integral.
std::size_t step_count(double duration, double h, std::string* warning = nullptr);

/// Runs steps 0..n, calling `sink` for each (g_k, f_k). Stops cleanly on the first
/// library error and reports it in the outcome; the sink has seen every completed step.
SimulationOutcome simulate(const ModelParams& p, const Configuration& g0, const Velocities& v0,
                           const SimulationSpec& spec, const StepSink& sink = {});

}  // namespace strpend
