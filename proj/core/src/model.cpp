#include "strpend/model.hpp"

#include "strpend/errors.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <sstream>
#include <string>

namespace strpend {

namespace {

bool finite(const Vec3& v) { return v.allFinite(); }

void require(bool ok, const char* field, const char* message) {
    if (!ok) throw ModelError(field, message);
}

// vee(A - A^T)
Vec3 axial(const Mat3& a) {
    return Vec3(a(2, 1) - a(1, 2), a(0, 2) - a(2, 0), a(1, 0) - a(0, 1));
}

double m3_factor(std::size_t n_elements, std::size_t a) {
    const double n = static_cast<double>(n_elements);
    const double ad = static_cast<double>(a);
    return (3.0 * n * n + 3.0 * n + 1.0 - 6.0 * n * ad - 3.0 * ad + 3.0 * ad * ad) / (n * n);
}

}  // namespace

void ModelParams::validate() const {
    require(reel.r_d.allFinite(), "reel.r_d", "must be finite");
    require(std::isfinite(reel.d) && reel.d > 0.0, "reel.d", "drum radius must be positive");
    require(std::isfinite(reel.kappa_d) && reel.kappa_d >= 0.0, "reel.kappa_d", "must be non-negative");
    require(std::isfinite(reel.b) && reel.b >= 0.0, "reel.b", "must be non-negative");

    require(std::isfinite(string.mu) && string.mu > 0.0, "string.mu", "must be positive");
    require(std::isfinite(string.ea) && string.ea > 0.0, "string.ea", "axial stiffness must be positive");
    require(std::isfinite(string.total_length) && string.total_length > 0.0, "string.total_length",
            "must be positive");
    require(reel.b < string.total_length, "reel.b", "must be shorter than string.total_length");

    require(std::isfinite(body.mass) && body.mass > 0.0, "body.mass", "must be positive");
    require(body.inertia.allFinite(), "body.inertia", "must be finite");
    const double asym = (body.inertia - body.inertia.transpose()).cwiseAbs().maxCoeff();
    require(asym <= 1e-12 * std::max(1.0, body.inertia.cwiseAbs().maxCoeff()), "body.inertia",
            "must be symmetric");
    Eigen::LLT<Mat3> llt(body.inertia);
    require(llt.info() == Eigen::Success, "body.inertia", "must be positive definite");
    require(body.rho_c.allFinite(), "body.rho_c", "must be finite");

    require(std::isfinite(env.gravity) && env.gravity >= 0.0, "env.gravity", "must be non-negative");
    require(env.r_p.allFinite(), "env.r_p", "must be finite");

    require(disc.n_elements >= 1, "disc.n_elements", "must be at least 1");
    require(std::isfinite(disc.time_step) && disc.time_step > 0.0, "disc.time_step", "must be positive");
}

RelativeUpdate RelativeUpdate::identity(std::size_t n_elements) {
    RelativeUpdate f;
    f.dq.assign(n_elements + 1, Vec3::Zero());
    return f;
}

RelativeUpdate RelativeUpdate::from_cayley(double ds_p, std::vector<Vec3> dq, const Vec3& c) {
    RelativeUpdate f;
    f.ds_p = ds_p;
    f.dq = std::move(dq);
    f.set_c(c);
    return f;
}

RelativeUpdate RelativeUpdate::from_rotation(double ds_p, std::vector<Vec3> dq, const Rotation& F) {
    RelativeUpdate f;
    f.ds_p = ds_p;
    f.dq = std::move(dq);
    f.c_ = cayley_inverse(F);
    f.F_ = F;
    return f;
}

void RelativeUpdate::set_c(const Vec3& c) {
    c_ = c;
    F_ = cayley(c);
}

Configuration compose(const Configuration& g, const RelativeUpdate& f) {
    Configuration out;
    out.s_p = g.s_p + f.ds_p;
    out.q.resize(g.q.size());
    for (std::size_t i = 0; i < g.q.size(); ++i) out.q[i] = g.q[i] + f.dq[i];
    out.R = g.R * f.F();
    return out;
}

Configuration compose_inverse(const Configuration& g, const RelativeUpdate& f) {
    Configuration out;
    out.s_p = g.s_p - f.ds_p;
    out.q.resize(g.q.size());
    for (std::size_t i = 0; i < g.q.size(); ++i) out.q[i] = g.q[i] - f.dq[i];
    out.R = g.R * f.F().transpose();
    return out;
}

void check_configuration(const Configuration& g, const ModelParams& p) {
    if (g.q.size() != p.n_elements() + 1) {
        throw ModelError("configuration.q", "expected " + std::to_string(p.n_elements() + 1) + " nodes");
    }
    if (!g.q[0].isZero(0.0)) throw ModelError("configuration.q", "node 1 must be pinned at the guide way");
    for (const auto& v : g.q) {
        if (!finite(v)) throw ModelError("configuration.q", "non-finite node position");
    }
    if (!(g.s_p >= p.reel.b)) throw ModelError("configuration.s_p", "must be at least reel.b");
    element_length(g.s_p, p);
}

double element_length(double s_p, const ModelParams& p) {
    const double l = (p.string.total_length - s_p) / p.disc.n_elements;
    if (!(l > 0.0)) {
        std::ostringstream os;
        os << "no deployed string left (s_p = " << s_p << " >= L = " << p.string.total_length << ")";
        throw ModelError("configuration.s_p", os.str());
    }
    return l;
}

Mat3 nonstandard_inertia(const Mat3& j) {
    return 0.5 * j.trace() * Mat3::Identity() - j;
}

InertiaCoeffs inertia_coeffs(double s_p, std::span<const Vec3> q, const ModelParams& p) {
    const std::size_t n = p.n_elements();
    const double mu = p.string.mu;
    const double l = element_length(s_p, p);
    const double nd = static_cast<double>(n);

    InertiaCoeffs c;
    c.m0 = mu * s_p + p.reel.kappa_d + mu * (p.string.total_length - s_p) / 3.0;
    c.m1 = mu * l / 3.0;
    c.m2 = c.m1;
    c.m12 = mu * l / 6.0;
    c.m3.resize(n);
    c.m23.resize(n);
    c.m31.resize(n);
    for (std::size_t e = 0; e < n; ++e) {
        const std::size_t a = e + 1;
        const double ad = static_cast<double>(a);
        const Vec3 chord = q[e] - q[e + 1];
        c.m3[e] = mu * l / 3.0 * m3_factor(n, a);
        c.m23[e] = mu / 6.0 * ((1.0 + 3.0 * nd - 3.0 * ad) / nd) * chord;
        c.m31[e] = mu / 6.0 * ((2.0 + 3.0 * nd - 3.0 * ad) / nd) * chord;
    }
    c.j_d = nonstandard_inertia(p.body.inertia);
    return c;
}

double kinetic_reel(double s_p, double ds_p, const ModelParams& p) {
    const double h = p.h();
    return 0.5 / (h * h) * (p.string.mu * s_p + p.reel.kappa_d) * ds_p * ds_p;
}

double kinetic_element(std::size_t e, const Configuration& g, const RelativeUpdate& f,
                       const InertiaCoeffs& c, const ModelParams& p) {
    const double h = p.h();
    const Vec3& vi = f.dq[e];
    const Vec3& vj = f.dq[e + 1];
    const double ds = f.ds_p;
    (void)g;
    return 0.5 / (h * h) *
           (c.m1 * vi.squaredNorm() + c.m2 * vj.squaredNorm() + c.m3[e] * ds * ds +
            2.0 * c.m12 * vi.dot(vj) + 2.0 * ds * c.m23[e].dot(vj) + 2.0 * ds * c.m31[e].dot(vi));
}

double kinetic_body(const Configuration& g, const RelativeUpdate& f, const ModelParams& p) {
    const double h = p.h();
    const double m = p.body.mass;
    const Vec3& v = f.dq.back();
    const Mat3& F = f.F().matrix();
    const Mat3 jd = nonstandard_inertia(p.body.inertia);
    const double rot = ((Mat3::Identity() - F) * jd).trace();
    const Vec3 arm = g.R.matrix() * ((F - Mat3::Identity()) * p.body.rho_c);
    return (0.5 * m * v.squaredNorm() + rot + m * v.dot(arm)) / (h * h);
}

double kinetic_total(const Configuration& g, const RelativeUpdate& f, const ModelParams& p) {
    const InertiaCoeffs c = inertia_coeffs(g.s_p, g.q, p);
    double t = kinetic_reel(g.s_p, f.ds_p, p);
    for (std::size_t e = 0; e < p.n_elements(); ++e) t += kinetic_element(e, g, f, c, p);
    return t + kinetic_body(g, f, p);
}

PotentialParts potential(const Configuration& g, const ModelParams& p) {
    const std::size_t n = p.n_elements();
    const double mu = p.string.mu;
    const double grav = p.env.gravity;
    const double l = element_length(g.s_p, p);
    const Vec3& rp = p.env.r_p;
    const double d = p.reel.d;
    const double wound = g.s_p - p.reel.b;

    PotentialParts v;
    v.reel = -mu * grav * (wound * p.reel.r_d.dot(kDown) + d * d * (std::cos(wound / d) - 1.0));
    for (std::size_t e = 0; e < n; ++e) {
        v.string_gravity += -0.5 * mu * grav * l * kDown.dot(2.0 * rp + g.q[e] + g.q[e + 1]);
        const double stretch = (g.q[e + 1] - g.q[e]).norm() - l;
        v.string_elastic += 0.5 * p.string.ea / l * stretch * stretch;
    }
    v.body_gravity = -p.body.mass * grav * kDown.dot(g.q[n] + rp + g.R * p.body.rho_c);
    return v;
}

double discrete_lagrangian(const Configuration& g, const RelativeUpdate& f, const ModelParams& p) {
    const double h = p.h();
    const Configuration next = compose(g, f);
    return h * kinetic_total(g, f, p) - 0.5 * h * potential(g, p).total() -
           0.5 * h * potential(next, p).total();
}

Vec3 grad_elastic(std::size_t e, std::span<const Vec3> q, double l, const ModelParams& p) {
    const Vec3 chord = q[e + 1] - q[e];
    const double len = chord.norm();
    if (!(len > 1e-12 * l)) {
        throw DegenerateElementError(e, "degenerate element " + std::to_string(e + 1) +
                                            ": coincident nodes, tension direction undefined");
    }
    return p.string.ea / l * ((len - l) / len) * chord;
}

PotentialGradient potential_gradient(const Configuration& g, const ModelParams& p) {
    const std::size_t n = p.n_elements();
    const double nd = static_cast<double>(n);
    const double mu = p.string.mu;
    const double grav = p.env.gravity;
    const double l = element_length(g.s_p, p);
    const Vec3& rp = p.env.r_p;
    const double d = p.reel.d;

    PotentialGradient out;
    out.q.assign(n + 1, Vec3::Zero());
    out.s_p = -mu * grav * p.reel.r_d.dot(kDown) + mu * grav * d * std::sin((g.s_p - p.reel.b) / d);
    const Vec3 weight = -0.5 * mu * grav * l * kDown;
    for (std::size_t e = 0; e < n; ++e) {
        const Vec3 tension = grad_elastic(e, g.q, l, p);
        out.q[e] += weight - tension;
        out.q[e + 1] += weight + tension;
        const double len2 = (g.q[e + 1] - g.q[e]).squaredNorm();
        out.s_p += 0.5 * mu * grav / nd * kDown.dot(2.0 * rp + g.q[e] + g.q[e + 1]) +
                   p.string.ea / (2.0 * nd * l * l) * (len2 - l * l);
    }
    out.q[n] += -p.body.mass * grav * kDown;
    out.R = -p.body.mass * grav * p.body.rho_c.cross(g.R.matrix().transpose() * kDown);
    return out;
}

DerivativeBundle derivatives_of_Ld(const Configuration& g, const RelativeUpdate& f, const ModelParams& p) {
    const std::size_t n = p.n_elements();
    const double nd = static_cast<double>(n);
    const double h = p.h();
    const double mu = p.string.mu;
    const double ds = f.ds_p;
    const Mat3& R = g.R.matrix();
    const Mat3& F = f.F().matrix();
    const Vec3& rho = p.body.rho_c;
    const double m = p.body.mass;

    const Configuration next = compose(g, f);
    const InertiaCoeffs c = inertia_coeffs(g.s_p, g.q, p);

    DerivativeBundle b;
    b.dV_now = potential_gradient(g, p);
    b.dV_next = potential_gradient(next, p);

    // h * dT/dx for every argument
    double kin_ds = (mu * g.s_p + p.reel.kappa_d) * ds / h;
    double kin_s = 0.5 * mu * ds * ds / h;
    std::vector<Vec3> kin_dq(n + 1, Vec3::Zero());
    std::vector<Vec3> kin_q(n + 1, Vec3::Zero());
    for (std::size_t e = 0; e < n; ++e) {
        const std::size_t a = e + 1;
        const double ad = static_cast<double>(a);
        const Vec3& vi = f.dq[e];
        const Vec3& vj = f.dq[e + 1];
        kin_dq[e] += (c.m1 * vi + c.m12 * vj + ds * c.m31[e]) / h;
        kin_dq[e + 1] += (c.m2 * vj + c.m12 * vi + ds * c.m23[e]) / h;
        kin_ds += (c.m3[e] * ds + c.m23[e].dot(vj) + c.m31[e].dot(vi)) / h;

        const double c23 = mu * (1.0 + 3.0 * nd - 3.0 * ad) / (6.0 * nd);
        const double c31 = mu * (2.0 + 3.0 * nd - 3.0 * ad) / (6.0 * nd);
        const Vec3 pull = ds / h * (c23 * vj + c31 * vi);
        kin_q[e] += pull;
        kin_q[e + 1] -= pull;

        kin_s -= mu / (6.0 * nd * h) *
                 (vi.squaredNorm() + vj.squaredNorm() + m3_factor(n, a) * ds * ds + vi.dot(vj));
    }
    const Vec3& tip = f.dq[n];
    kin_dq[n] += m / h * (tip + R * ((F - Mat3::Identity()) * rho));
    const Vec3 kin_F = axial(c.j_d * F) / h + m / h * rho.cross(F.transpose() * (R.transpose() * tip));
    const Vec3 kin_R = m / h * ((F - Mat3::Identity()) * rho).cross(R.transpose() * tip);

    b.d_ds_p = kin_ds - 0.5 * h * b.dV_next.s_p;
    b.d_s_p = kin_s - 0.5 * h * (b.dV_now.s_p + b.dV_next.s_p);
    b.d_dq.resize(n + 1);
    b.d_q.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        b.d_dq[i] = kin_dq[i] - 0.5 * h * b.dV_next.q[i];
        b.d_q[i] = kin_q[i] - 0.5 * h * (b.dV_now.q[i] + b.dV_next.q[i]);
    }
    b.d_F = kin_F - 0.5 * h * b.dV_next.R;
    b.d_R = kin_R - 0.5 * h * (b.dV_now.R + F * b.dV_next.R);
    return b;
}

Vec3 coadjoint_F(const Vec3& p, const Rotation& F) {
    return F * p;
}

}  // namespace strpend
