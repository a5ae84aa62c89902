#include "strpend/config.hpp"
#include "strpend/diagnostics.hpp"
#include "strpend/errors.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace strpend;
using strpend::testing::Gen;
using strpend::testing::rot;

namespace {

ConfigError parse_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e;
    }
    ADD_FAILURE() << "expected ConfigError for:\n" << text;
    return ConfigError("none");
}

}  // namespace

TEST(Presets, SharedParameters) {
    for (auto preset : {ScenarioPreset::Case1Fixed, ScenarioPreset::Case2Deploy, ScenarioPreset::Case3Retrieve}) {
        const RunConfig c = expand_preset(preset);
        const ModelParams& m = c.model;
        EXPECT_EQ(m.reel.r_d, Vec3::Zero());
        EXPECT_EQ(m.reel.d, 0.5);
        EXPECT_EQ(m.reel.kappa_d, 1.0);
        EXPECT_EQ(m.reel.b, 0.5);
        EXPECT_EQ(m.string.mu, 0.025);
        EXPECT_EQ(m.string.ea, 40.0);
        EXPECT_EQ(m.string.total_length, 100.0);
        EXPECT_EQ(m.body.mass, 0.1);
        EXPECT_EQ(m.body.rho_c, Vec3(0.3, 0.2, 0.4));
        EXPECT_EQ(m.env.gravity, 9.81);
        EXPECT_EQ(m.disc.n_elements, 20);
        EXPECT_EQ(m.h(), 5e-4);
        EXPECT_EQ(c.initial.velocities.tip, Vec3(0, 0.5, 0));
        EXPECT_EQ(c.initial.R0.matrix(), Mat3::Identity());
        EXPECT_EQ(c.initial.omega0, Vec3::Zero());
        EXPECT_NO_THROW(c.validate());
    }
}

TEST(Presets, BodyInertiaAboutAttachmentPoint) {
    const Mat3 j = expand_preset(ScenarioPreset::Case1Fixed).model.body.inertia;
    Mat3 expected;
    expected << 0.0293333333333, -0.006, -0.012, -0.006, 0.0365833333333, -0.008, -0.012, -0.008, 0.02325;
    EXPECT_LE((j - expected).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(j, j.transpose());
}

TEST(Presets, ScenarioSpecifics) {
    const RunConfig c1 = expand_preset(ScenarioPreset::Case1Fixed);
    EXPECT_EQ(c1.initial.s_p0, 90.0);
    EXPECT_TRUE(c1.run.fixed_length);
    EXPECT_EQ(c1.run.duration, 10.0);
    EXPECT_EQ(c1.control.mode(), ControlInput::Mode::None);
    EXPECT_EQ(c1.initial.layout.direction, Vec3::UnitX());

    const RunConfig c2 = expand_preset(ScenarioPreset::Case2Deploy);
    EXPECT_EQ(c2.initial.s_p0, 99.0);
    EXPECT_FALSE(c2.run.fixed_length);
    EXPECT_EQ(c2.run.duration, 8.0);
    EXPECT_EQ(c2.control.at(3.0), 0.0);
    EXPECT_NEAR(element_length(c2.initial.s_p0, c2.model), 0.05, 1e-15);

    const RunConfig c3 = expand_preset(ScenarioPreset::Case3Retrieve);
    EXPECT_EQ(c3.initial.s_p0, 90.0);
    EXPECT_EQ(c3.control.at(0.0), 2.09);
    const Configuration g3 = initial_configuration(c3);
    const double angle = 15.0 * M_PI / 180.0;
    EXPECT_LE((g3.q.back() - 10.0 * Vec3(std::sin(angle), 0, std::cos(angle))).norm(), 1e-13);
}

TEST(Presets, InitialConfigurationIsUnstretchedLine) {
    const RunConfig c = expand_preset(ScenarioPreset::Case1Fixed);
    const Configuration g = initial_configuration(c);
    ASSERT_EQ(g.q.size(), 21u);
    EXPECT_EQ(g.q[0], Vec3::Zero());
    for (double s : strain_field(g, c.model)) EXPECT_NEAR(s, 0.0, 1e-14);
    const Velocities v = initial_velocities(c);
    EXPECT_EQ(v.q_rate.back(), Vec3(0, 0.5, 0));
    for (std::size_t a = 0; a < 20; ++a) EXPECT_EQ(v.q_rate[a], Vec3::Zero());
}

TEST(PresetNames, ShortAndLongForms) {
    EXPECT_EQ(parse_preset("case1"), ScenarioPreset::Case1Fixed);
    EXPECT_EQ(parse_preset("case2_deploy"), ScenarioPreset::Case2Deploy);
    EXPECT_EQ(parse_preset("case3_retrieve"), ScenarioPreset::Case3Retrieve);
    EXPECT_FALSE(parse_preset("case4").has_value());
    EXPECT_EQ(preset_name(ScenarioPreset::Case2Deploy), "case2");
}

TEST(ParseConfig, PresetWithOverrides) {
    const RunConfig c = parse_config(
        "# comment line\n"
        "[sim]\n"
        "preset = case2\n"
        "n_elements = 8   # trailing comment\n"
        "duration = 0.5\n"
        "[control]\n"
        "mode = tabulated\n"
        "table = 0 0; 1 2.5\n");
    RunConfig expected = expand_preset(ScenarioPreset::Case2Deploy);
    expected.model.disc.n_elements = 8;
    expected.run.duration = 0.5;
    expected.control = ControlInput::tabulated({{0.0, 0.0}, {1.0, 2.5}});
    EXPECT_EQ(c, expected);
}

TEST(ParseConfig, ExplicitNodesAndVelocities) {
    const RunConfig c = parse_config(
        "[sim]\nn_elements = 2\nduration = 1\n"
        "[initial]\ns_p = 99\nnodes = 0 0 0; 0.5 0 0; 0.5 0 0.5\n"
        "node_velocities = 0 0 0; 0 1 0; 0 2 0\n");
    EXPECT_EQ(c.initial.layout.kind, NodeLayout::Kind::Explicit);
    EXPECT_EQ(initial_configuration(c).q[2], Vec3(0.5, 0, 0.5));
    EXPECT_EQ(initial_velocities(c).q_rate[2], Vec3(0, 2, 0));
}

TEST(ParseConfig, UnknownKeyReportsLineAndField) {
    const ConfigError e = parse_error("[sim]\nn_elements = 4\n\n[string]\nstiffness = 3\n");
    EXPECT_EQ(e.line(), 5);
    EXPECT_EQ(e.field(), "string.stiffness");
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos);
}

TEST(ParseConfig, RejectsMalformedInput) {
    EXPECT_EQ(parse_error("[sim]\nn_elements = 4\nn_elements = 5\n").line(), 3);
    EXPECT_EQ(parse_error("[bogus]\n").line(), 1);
    EXPECT_EQ(parse_error("n_elements = 4\n").line(), 1);
    EXPECT_EQ(parse_error("[sim]\ntime_step = fast\n").field(), "sim.time_step");
    EXPECT_EQ(parse_error("[sim]\nr_p = 1 2\n").field(), "sim.r_p");
    EXPECT_EQ(parse_error("[sim]\npreset = case9\n").field(), "sim.preset");
    EXPECT_EQ(parse_error("[initial]\nR0 = 2 0 0 0 2 0 0 0 2\n").field(), "initial.R0");
    EXPECT_EQ(parse_error("[control]\nmode = constant\n").field(), "control.value");
    EXPECT_EQ(parse_error("[control]\nmode = tabulated\ntable = 1 0; 0 1\n").field(), "control.table");
}

TEST(ParseConfig, ValidationErrorsNameTheField) {
    EXPECT_EQ(parse_error("[sim]\nn_elements = 0\n").field(), "disc.n_elements");
    EXPECT_EQ(parse_error("[string]\nea = 0\n").field(), "string.ea");
    EXPECT_EQ(parse_error("[string]\nea = -4\n").field(), "string.ea");
    EXPECT_EQ(parse_error("[sim]\ntime_step = 0\n").field(), "disc.time_step");
    EXPECT_EQ(parse_error("[body]\ninertia = 1 0 0 0 1 0 0 0 -1\n").field(), "body.inertia");
    EXPECT_EQ(parse_error("[initial]\ns_p = 0.1\n").field(), "initial.s_p");
    EXPECT_EQ(parse_error("[newton]\nmax_iter = 0\n").field(), "newton.max_iter");
    EXPECT_EQ(parse_error("[output]\noutput_every = 0\n").field(), "output.output_every");
    EXPECT_EQ(parse_error("[sim]\nfixed_length = true\n[initial]\ns_p_rate = 1\n").field(), "initial.s_p_rate");
    EXPECT_EQ(parse_error("[sim]\nn_elements = 2\n[initial]\nnodes = 0 0 0; 1 0 0\n").field(), "initial.nodes");
    EXPECT_EQ(parse_error("[sim]\nn_elements = 1\n[initial]\nnodes = 0 0 0; 0 0 0\n").field(), "initial.nodes");
    EXPECT_EQ(parse_error("[sim]\nn_elements = 1\n[initial]\nnode_velocities = 1 0 0; 0 0 0\n").field(),
              "initial.node_velocities");
}

TEST(WriteConfig, PresetsRoundTrip) {
    for (auto preset : {ScenarioPreset::Case1Fixed, ScenarioPreset::Case2Deploy, ScenarioPreset::Case3Retrieve}) {
        const RunConfig c = expand_preset(preset);
        EXPECT_EQ(parse_config(write_config(c)), c) << write_config(c);
    }
}

TEST(WriteConfig, RandomConfigsRoundTrip) {
    Gen gen(500);
    for (int trial = 0; trial < 50; ++trial) {
        RunConfig c;
        const int n = gen.pick({1, 3, 7});
        c.model = gen.params(n, gen.uniform(1e-4, 1e-2));
        c.initial.s_p0 = gen.uniform(c.model.reel.b, c.model.string.total_length - 1.0);
        c.initial.R0 = rot(gen.vec(2.0));
        c.initial.omega0 = gen.vec(1.0);
        c.run.duration = gen.uniform(0.1, 20.0);
        c.run.output_every = gen.pick({1, 10, 33});
        c.run.snapshot_every = gen.pick({0, 100});
        c.run.fixed_length = trial % 2 == 0;
        c.initial.s_p_rate = c.run.fixed_length ? 0.0 : gen.uniform(-1, 1);
        if (trial % 3 == 0) {
            const Configuration g = gen.configuration(c.model);
            c.initial.s_p0 = g.s_p;
            c.initial.layout.kind = NodeLayout::Kind::Explicit;
            c.initial.layout.nodes = g.q;
            c.initial.velocities.kind = NodeVelocities::Kind::Explicit;
            c.initial.velocities.nodes.assign(static_cast<std::size_t>(n) + 1, Vec3::Zero());
            for (int a = 1; a <= n; ++a) c.initial.velocities.nodes[static_cast<std::size_t>(a)] = gen.vec(1.0);
        } else {
            c.initial.layout.direction = gen.unit();
            if (trial % 3 == 1) c.initial.layout.spacing = gen.uniform(0.1, 1.0);
            c.initial.velocities.tip = gen.vec(1.0);
        }
        switch (trial % 3) {
            case 0: c.control = ControlInput::none(); break;
            case 1: c.control = ControlInput::constant(gen.uniform(-5, 5)); break;
            default: c.control = ControlInput::tabulated({{0.0, gen.uniform(-1, 1)}, {gen.uniform(0.5, 2), 1.0}});
        }
        c.newton.tol = gen.uniform(1e-14, 1e-8);
        c.newton.max_iter = gen.pick({5, 50});
        c.newton.jacobian_reuse = gen.pick({1, 4});
        c.output_dir = "runs/trial_" + std::to_string(trial);
        ASSERT_NO_THROW(c.validate()) << write_config(c);
        EXPECT_EQ(parse_config(write_config(c)), c) << write_config(c);
    }
}

TEST(Describe, MentionsDerivedQuantities) {
    const std::string d = describe(expand_preset(ScenarioPreset::Case2Deploy));
    EXPECT_NE(d.find("l0 = 0.05"), std::string::npos);
    EXPECT_NE(d.find("steps = 16000"), std::string::npos);
    EXPECT_NE(d.find("unknowns = 64"), std::string::npos);
}

TEST(LoadConfig, MissingFileIsConfigError) {
    EXPECT_THROW(load_config("/nonexistent/strpend.ini"), ConfigError);
}
