#include "strpend/config.hpp"
#include "strpend/diagnostics.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace strpend;
using strpend::testing::Gen;
using strpend::testing::diff;
using strpend::testing::rot;

TEST(ReconstructVelocities, InvertsInitialUpdate) {
    Gen gen(400);
    const ModelParams p = gen.params(5, 1e-3);
    const Configuration g = gen.configuration(p);
    Velocities v;
    v.s_p_rate = -0.7;
    v.q_rate.assign(6, Vec3::Zero());
    for (std::size_t a = 1; a <= 5; ++a) v.q_rate[a] = gen.vec(2.0);
    v.omega = Vec3(4.0, -2.0, 1.0);
    const Velocities back = reconstruct_velocities(g, initialize_update(g, v, p), p);
    EXPECT_NEAR(back.s_p_rate, v.s_p_rate, 1e-14);
    for (std::size_t a = 0; a <= 5; ++a) EXPECT_LE((back.q_rate[a] - v.q_rate[a]).norm(), 1e-13);
    // Cayley with c = h omega / 2 gives omega / (1 + h^2 |omega|^2 / 4).
    const double shrink = 1.0 / (1.0 + 0.25 * p.h() * p.h() * v.omega.squaredNorm());
    EXPECT_LE((back.omega - shrink * v.omega).norm(), 1e-12);
}

TEST(TotalEnergy, PartsSumAndRestStateIsPurePotential) {
    Gen gen(410);
    const ModelParams p = gen.params(5, 1e-3);
    const Configuration g = gen.configuration(p);
    const RelativeUpdate f = gen.update(p, 1.0);
    const EnergyParts e = total_energy(g, f, p);
    EXPECT_NEAR(e.total, e.kinetic + e.v_gravity + e.v_elastic, 1e-12 * std::abs(e.total));
    EXPECT_GT(e.kinetic, e.kinetic_rot);
    EXPECT_GT(e.kinetic_rot, 0.0);

    const EnergyParts rest = total_energy(g, RelativeUpdate::identity(5), p);
    const PotentialParts v = potential(g, p);
    EXPECT_EQ(rest.kinetic, 0.0);
    EXPECT_EQ(rest.kinetic_rot, 0.0);
    EXPECT_NEAR(rest.v_gravity, v.gravity(), 1e-12 * std::abs(v.gravity()));
    EXPECT_NEAR(rest.v_elastic, v.string_elastic, 1e-15);
}

TEST(TotalEnergy, EqualsMinusTimeStepDerivativeOfDiscreteLagrangian) {
    Gen gen(420);
    for (int trial = 0; trial < 10; ++trial) {
        ModelParams p = gen.params(gen.pick({1, 3, 10}), gen.uniform(5e-4, 2e-3));
        const Configuration g = gen.configuration(p);
        const RelativeUpdate f = gen.update(p, 2.0);
        const double h = p.h();
        const double dLdh = diff(
            [&](double e) {
                ModelParams q = p;
                q.disc.time_step = h + e;
                return discrete_lagrangian(g, f, q);
            },
            1e-3 * h);
        const double e = total_energy(g, f, p).total;
        EXPECT_NEAR(e, -dLdh, 1e-8 * std::max(1.0, std::abs(e))) << "trial " << trial;
    }
}

TEST(AngularMomentum, ZeroAtRest) {
    Gen gen(430);
    const ModelParams p = gen.params(5, 1e-3);
    const Configuration g = gen.configuration(p);
    EXPECT_NEAR(angular_momentum_e3(g, RelativeUpdate::identity(5), p), 0.0, 1e-14);
}

TEST(AngularMomentum, InvariantUnderRotationAboutVertical) {
    Gen gen(440);
    for (int trial = 0; trial < 10; ++trial) {
        const ModelParams p = gen.params(5, 1e-3);
        const Configuration g = gen.configuration(p);
        const RelativeUpdate f = gen.update(p, 2.0);
        const Rotation Q = rot(Vec3(0, 0, gen.uniform(-3, 3)));
        Configuration g2 = g;
        std::vector<Vec3> dq = f.dq;
        for (auto& q : g2.q) q = Q * q;
        for (auto& d : dq) d = Q * d;
        g2.R = Q * g.R;
        const RelativeUpdate f2 = RelativeUpdate::from_rotation(f.ds_p, std::move(dq), f.F());
        const double a = angular_momentum_e3(g, f, p);
        const double b = angular_momentum_e3(g2, f2, p);
        EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST(AngularMomentum, SpinningBodyAboutVertical) {
    ModelParams p;
    p.disc.n_elements = 2;
    p.body.rho_c = Vec3::Zero();
    p.body.inertia = Vec3(0.02, 0.03, 0.05).asDiagonal();
    Configuration g;
    g.s_p = 90.0;
    g.q = {Vec3::Zero(), Vec3(0, 0, 5), Vec3(0, 0, 10)};
    Velocities v;
    v.q_rate.assign(3, Vec3::Zero());
    v.omega = Vec3(0, 0, 3.0);
    const double pi3 = angular_momentum_e3(g, initialize_update(g, v, p), p);
    EXPECT_NEAR(pi3, 0.05 * 3.0, 1e-6);
}

TEST(AngularMomentum, ConservedAlongTrajectory) {
    RunConfig c = expand_preset(ScenarioPreset::Case3Retrieve);
    c.model.disc.n_elements = 5;
    Velocities v = initial_velocities(c);
    v.omega = Vec3(0.5, 1.0, -2.0);
    SimulationSpec spec{0.2, ReelMode::Free, c.control, c.newton};
    std::vector<double> pi;
    const auto out = simulate(c.model, initial_configuration(c), v, spec,
                              [&](const StepEvent& e) { pi.push_back(angular_momentum_e3(e.g, e.f, c.model)); });
    ASSERT_TRUE(out.ok()) << out.message;
    ASSERT_GT(std::abs(pi.front()), 1e-3);
    for (double x : pi) EXPECT_NEAR(x, pi.front(), 1e-10 * std::abs(pi.front()) + 1e-12);
}

TEST(StrainField, Examples) {
    ModelParams p;
    p.disc.n_elements = 2;
    Configuration g;
    g.s_p = 99.0;  // l = 0.5
    g.q = {Vec3::Zero(), Vec3(0.55, 0, 0), Vec3(0.55, 0.45, 0)};
    const auto s = strain_field(g, p);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_NEAR(s[0], 0.1, 1e-15);
    EXPECT_NEAR(s[1], -0.1, 1e-15);
}

TEST(MakeSnapshot, AbsolutePositionsAndCentreOfMass) {
    ModelParams p;
    p.disc.n_elements = 1;
    p.env.r_p = Vec3(1, 2, 3);
    p.body.rho_c = Vec3(0.1, 0, 0);
    Configuration g;
    g.s_p = 99.0;
    g.q = {Vec3::Zero(), Vec3(0, 0, 1)};
    g.R = rot(Vec3(0, 0, M_PI / 2));
    const Snapshot s = make_snapshot(2.5, g, p);
    EXPECT_EQ(s.t, 2.5);
    EXPECT_EQ(s.node_positions[0], Vec3(1, 2, 3));
    EXPECT_EQ(s.node_positions[1], Vec3(1, 2, 4));
    EXPECT_LE((s.body_com - Vec3(1, 2.1, 4)).norm(), 1e-15);
    EXPECT_NEAR(s.element_strains[0], 0.0, 1e-15);
}

TEST(Monitor, PairsImpulsesWithCentredDisplacements) {
    ModelParams p;
    p.disc.n_elements = 1;
    p.disc.time_step = 0.1;
    Configuration g;
    g.s_p = 99.0;
    g.q = {Vec3::Zero(), Vec3(0, 0, 1)};
    Monitor m(p);
    const double ds[] = {0.01, 0.03, -0.02};
    const double q[] = {-5.0, -1.0, -2.0};
    const double u[] = {7.0, 3.0, 4.0};
    std::vector<StepRecord> records;
    for (int k = 0; k < 3; ++k) {
        RelativeUpdate f = RelativeUpdate::identity(1);
        f.ds_p = ds[k];
        StepResult r;
        r.f_next = f;
        r.carnot_impulse = q[k];
        r.control_impulse = u[k];
        records.push_back(m.observe(StepEvent{static_cast<std::size_t>(k), 0.1 * k, g, f, r}));
    }
    // Step 0 contributes nothing; step k uses (ds_{k-1} + ds_k) / 2h.
    EXPECT_EQ(records[0].cum_dissipation, 0.0);
    EXPECT_EQ(records[0].cum_control_work, 0.0);
    const double w1 = 0.5 * (0.01 + 0.03) / 0.1;
    const double w2 = 0.5 * (0.03 - 0.02) / 0.1;
    EXPECT_NEAR(records[1].cum_dissipation, -1.0 * w1, 1e-15);
    EXPECT_NEAR(records[2].cum_dissipation, -1.0 * w1 - 2.0 * w2, 1e-15);
    EXPECT_NEAR(records[2].cum_control_work, 3.0 * w1 + 4.0 * w2, 1e-15);
    EXPECT_EQ(m.cum_control_work(), records[2].cum_control_work);
    EXPECT_NEAR(records[1].ds_p_rate, 0.3, 1e-15);
    EXPECT_EQ(records[2].ortho_err, 0.0);
}
