#include "strpend/errors.hpp"
#include "strpend/model.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace strpend;
using strpend::testing::Gen;
using strpend::testing::diff;
using strpend::testing::expm;
using strpend::testing::rel_err;
using strpend::testing::fd_derivatives;
using strpend::testing::flat;
using strpend::testing::scalar;

class DerivativeOracle : public ::testing::TestWithParam<int> {};

TEST_P(DerivativeOracle, ClosedFormMatchesFiniteDifferences) {
    const int n = GetParam();
    Gen gen(100 + static_cast<unsigned>(n));
    for (int trial = 0; trial < 10; ++trial) {
        const ModelParams p = gen.params(n, gen.uniform(5e-4, 2e-3));
        const Configuration g = gen.configuration(p);
        const RelativeUpdate f = gen.update(p, 2.0);
        const DerivativeBundle b = derivatives_of_Ld(g, f, p);
        const auto fd = fd_derivatives(g, f, p);

        EXPECT_LE(rel_err(scalar(b.d_ds_p), scalar(fd.d_ds_p), 1e-9), 1e-6) << "d_ds_p trial " << trial;
        EXPECT_LE(rel_err(scalar(b.d_s_p), scalar(fd.d_s_p), 1e-9), 1e-6) << "d_s_p trial " << trial;
        EXPECT_LE(rel_err(flat(b.d_dq), fd.d_dq, 1e-9), 1e-6) << "d_dq trial " << trial;
        EXPECT_LE(rel_err(flat(b.d_q), fd.d_q, 1e-9), 1e-6) << "d_q trial " << trial;
        EXPECT_LE(rel_err(b.d_F, fd.d_F, 1e-9), 1e-6) << "d_F trial " << trial;
        EXPECT_LE(rel_err(b.d_R, fd.d_R, 1e-9), 1e-6) << "d_R trial " << trial;
    }
}

INSTANTIATE_TEST_SUITE_P(Elements, DerivativeOracle, ::testing::Values(1, 2, 5, 20));

TEST(PotentialGradient, MatchesFiniteDifferences) {
    Gen gen(200);
    for (int trial = 0; trial < 20; ++trial) {
        const ModelParams p = gen.params(gen.pick({2, 5, 20}), 1e-3);
        const Configuration g = gen.configuration(p);
        const PotentialGradient grad = potential_gradient(g, p);
        auto V = [&](const Configuration& gg) { return potential(gg, p).total(); };
        const double eps = 1e-4 * element_length(g.s_p, p);
        const double fd_s = diff([&](double e) { Configuration gg = g; gg.s_p += e; return V(gg); }, eps);
        EXPECT_LE(rel_err(scalar(grad.s_p), scalar(fd_s), 1e-9), 1e-7);
        Eigen::VectorXd fd_q(3 * static_cast<Eigen::Index>(g.q.size()));
        for (std::size_t a = 0; a < g.q.size(); ++a)
            for (int k = 0; k < 3; ++k)
                fd_q(static_cast<Eigen::Index>(3 * a) + k) =
                    diff([&](double e) { Configuration gg = g; gg.q[a][k] += e; return V(gg); }, eps);
        EXPECT_LE(rel_err(flat(grad.q), fd_q, 1e-9), 1e-7);
        Vec3 fd_r;
        for (int k = 0; k < 3; ++k)
            fd_r(k) = diff(
                [&](double e) {
                    Configuration gg = g;
                    gg.R = Rotation::from_matrix(g.R.matrix() * expm(e * Vec3::Unit(k)), 1e-10);
                    return V(gg);
                },
                1e-4);
        EXPECT_LE(rel_err(grad.R, fd_r, 1e-9), 1e-7);
    }
}

TEST(PotentialGradient, BodyTermClosedForm) {
    ModelParams p;
    p.disc.n_elements = 1;
    p.body.rho_c = Vec3(0.3, 0.2, 0.4);
    Configuration g;
    g.s_p = 99.0;
    g.q = {Vec3::Zero(), Vec3(1, 0, 0)};
    g.R = cayley(Vec3(0.1, -0.3, 0.2));
    const Vec3 expected = -p.body.mass * p.env.gravity * hat(p.body.rho_c) * g.R.matrix().transpose() * kDown;
    EXPECT_LE((potential_gradient(g, p).R - expected).norm(), 1e-15);
}

TEST(Derivatives, DegenerateElementAtNextLevelThrows) {
    ModelParams p;
    p.disc.n_elements = 2;
    Configuration g;
    g.s_p = 99.0;
    g.q = {Vec3::Zero(), Vec3(0.5, 0, 0), Vec3(1.0, 0, 0)};
    RelativeUpdate f = RelativeUpdate::identity(2);
    f.dq[2] = Vec3(-0.5, 0, 0);
    EXPECT_THROW(derivatives_of_Ld(g, f, p), DegenerateElementError);
}

TEST(Derivatives, StaticUnforcedStateHasZeroMomentum) {
    ModelParams p;
    p.env.gravity = 0.0;
    p.disc.n_elements = 4;
    Configuration g;
    g.s_p = 98.0;
    for (int a = 0; a <= 4; ++a) g.q.push_back(Vec3(0.5 * a, 0, 0));
    const DerivativeBundle b = derivatives_of_Ld(g, RelativeUpdate::identity(4), p);
    EXPECT_EQ(b.d_ds_p, 0.0);
    for (const auto& v : b.d_dq) EXPECT_EQ(v.norm(), 0.0);
    for (const auto& v : b.d_q) EXPECT_EQ(v.norm(), 0.0);
    EXPECT_EQ(b.d_F.norm(), 0.0);
    EXPECT_EQ(b.d_R.norm(), 0.0);
}
