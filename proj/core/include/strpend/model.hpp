#pragma once

#include "strpend/liegroup.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace strpend {

/// Direction of the gravitational force. Potentials carry -(...) . e3.
inline const Vec3 kDown = Vec3::UnitZ();

/// Drum and guide way. The drum inertia is I_d = kappa_d * d^2.
struct ReelParams {
    Vec3 r_d = Vec3::Zero();  ///< origin of the drum axis [m]
    double d = 0.5;           ///< drum radius [m]
    double kappa_d = 1.0;     ///< [kg]
    double b = 0.5;           ///< drum-to-guide-way length [m]
};

struct StringParams {
    double mu = 0.025;           ///< mass per unit unstretched length [kg/m]
    double ea = 40.0;            ///< axial stiffness EA [N]
    double total_length = 100;   ///< L [m]
};

struct BodyParams {
    double mass = 0.1;                    ///< [kg]
    Mat3 inertia = Mat3::Identity();      ///< about the attachment point, body frame [kg m^2]
    Vec3 rho_c = Vec3::Zero();            ///< attachment point to centre of mass, body frame [m]
};

struct Environment {
    double gravity = 9.81;      ///< [m/s^2]
    Vec3 r_p = Vec3::Zero();    ///< inertial position of the guide way entrance [m]
};

struct Discretization {
    int n_elements = 20;        ///< N
    double time_step = 5e-4;    ///< h [s]
};

struct ModelParams {
    ReelParams reel;
    StringParams string;
    BodyParams body;
    Environment env;
    Discretization disc;

    /// Throws ModelError naming the first violated field.
    void validate() const;

    std::size_t n_elements() const { return static_cast<std::size_t>(disc.n_elements); }
    double h() const { return disc.time_step; }
};

/// Group element g = (s_p; q_1..q_{N+1}; R). q holds node positions relative to r_p;
/// q[0] is the guide way entrance and is always zero.
struct Configuration {
    double s_p = 0.0;
    std::vector<Vec3> q;
    Rotation R;

    std::size_t n_elements() const { return q.empty() ? 0 : q.size() - 1; }
};

/// Relative update f with g_{k+1} = g_k f. The attitude part F and its Cayley
/// coordinate c are kept consistent by construction.
class RelativeUpdate {
public:
    double ds_p = 0.0;
    std::vector<Vec3> dq;  ///< dq[0] is always zero (pinned node)

    RelativeUpdate() = default;

    static RelativeUpdate identity(std::size_t n_elements);
    /// F = cayley(c).
    static RelativeUpdate from_cayley(double ds_p, std::vector<Vec3> dq, const Vec3& c);
    /// Keeps F exactly and derives c = cayley_inverse(F).
    static RelativeUpdate from_rotation(double ds_p, std::vector<Vec3> dq, const Rotation& F);

    const Vec3& c() const noexcept { return c_; }
    const Rotation& F() const noexcept { return F_; }
    void set_c(const Vec3& c);

    std::size_t n_elements() const { return dq.empty() ? 0 : dq.size() - 1; }

private:
    Vec3 c_ = Vec3::Zero();
    Rotation F_;
};

/// g f: add the increments and right-multiply the attitude.
Configuration compose(const Configuration& g, const RelativeUpdate& f);
/// g f^{-1}: subtract the increments and right-multiply by F^T.
Configuration compose_inverse(const Configuration& g, const RelativeUpdate& f);

/// Checks the Configuration invariants (sizes, pinned node, b <= s_p < L).
void check_configuration(const Configuration& g, const ModelParams& p);

/// Coefficients of the discrete kinetic energy for one time level.
/// Per-element arrays are zero-based: index e belongs to element a = e + 1.
struct InertiaCoeffs {
    double m0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    double m12 = 0.0;
    std::vector<double> m3;
    std::vector<Vec3> m23;
    std::vector<Vec3> m31;
    Mat3 j_d = Mat3::Zero();
};

/// l = (L - s_p) / N. Throws ModelError("string fully deployed") when s_p >= L.
double element_length(double s_p, const ModelParams& p);

InertiaCoeffs inertia_coeffs(double s_p, std::span<const Vec3> q, const ModelParams& p);

/// J_d = tr(J)/2 I - J.
Mat3 nonstandard_inertia(const Mat3& j);

double kinetic_reel(double s_p, double ds_p, const ModelParams& p);
/// Zero-based element index e (element a = e + 1).
double kinetic_element(std::size_t e, const Configuration& g, const RelativeUpdate& f,
                       const InertiaCoeffs& coeffs, const ModelParams& p);
double kinetic_body(const Configuration& g, const RelativeUpdate& f, const ModelParams& p);
double kinetic_total(const Configuration& g, const RelativeUpdate& f, const ModelParams& p);

struct PotentialParts {
    double reel = 0.0;
    double string_gravity = 0.0;
    double string_elastic = 0.0;
    double body_gravity = 0.0;

    double gravity() const { return reel + string_gravity + body_gravity; }
    double total() const { return reel + string_gravity + string_elastic + body_gravity; }
};

/// Potential energy of the discretized system. The reel part is
/// -mu g [(s_p - b) r_d.e3 + d^2 (cos((s_p - b)/d) - 1)].
PotentialParts potential(const Configuration& g, const ModelParams& p);

/// L_d = h T(g, f) - h/2 V(g) - h/2 V(g f).
double discrete_lagrangian(const Configuration& g, const RelativeUpdate& f, const ModelParams& p);

/// Tension of element e: (EA/l) (|dq| - l)/|dq| dq with dq = q[e+1] - q[e].
/// Throws DegenerateElementError for coincident nodes.
Vec3 grad_elastic(std::size_t e, std::span<const Vec3> q, double l, const ModelParams& p);

/// Gradient of the potential at one time level. SO(3) part is left-trivialized
/// (variation R exp(eta^)).
struct PotentialGradient {
    double s_p = 0.0;
    std::vector<Vec3> q;
    Vec3 R = Vec3::Zero();
};

PotentialGradient potential_gradient(const Configuration& g, const ModelParams& p);

/// Closed-form derivatives of L_d(g, f). Node arrays are zero-based and
/// include the pinned node. SO(3) entries are trivialized cotangent vectors.
struct DerivativeBundle {
    double d_ds_p = 0.0;            ///< D_{ds_p} L_d
    std::vector<Vec3> d_dq;         ///< D_{dq_a} L_d
    Vec3 d_F = Vec3::Zero();        ///< T*_I L_F . D_F L_d
    double d_s_p = 0.0;             ///< D_{s_p} L_d
    std::vector<Vec3> d_q;          ///< D_{q_a} L_d
    Vec3 d_R = Vec3::Zero();        ///< T*_I L_R . D_R L_d
    PotentialGradient dV_now;       ///< potential gradient at g
    PotentialGradient dV_next;      ///< potential gradient at g f
};

DerivativeBundle derivatives_of_Ld(const Configuration& g, const RelativeUpdate& f, const ModelParams& p);

/// Ad*_{F^{-1}} p = F p.
Vec3 coadjoint_F(const Vec3& p, const Rotation& F);

}  // namespace strpend
