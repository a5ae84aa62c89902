#pragma once

#include "strpend/integrator.hpp"
#include "strpend/model.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace strpend {

/// Initial string shape: nodes on a ray from the guide way, or listed explicitly.
struct NodeLayout {
    enum class Kind { Line, Explicit };
    Kind kind = Kind::Line;
    Vec3 direction = Vec3::UnitX();   ///< normalized when the configuration is built
    std::optional<double> spacing;    ///< defaults to the unstretched element length
    std::vector<Vec3> nodes;          ///< Explicit only, N + 1 entries relative to r_p

    friend bool operator==(const NodeLayout&, const NodeLayout&) = default;
};

/// Initial node rates: only the tip moves, or listed explicitly.
struct NodeVelocities {
    enum class Kind { TipOnly, Explicit };
    Kind kind = Kind::TipOnly;
    Vec3 tip = Vec3::Zero();
    std::vector<Vec3> nodes;

    friend bool operator==(const NodeVelocities&, const NodeVelocities&) = default;
};

struct InitialState {
    double s_p0 = 90.0;
    NodeLayout layout;
    double s_p_rate = 0.0;
    NodeVelocities velocities;
    Rotation R0;
    Vec3 omega0 = Vec3::Zero();

    friend bool operator==(const InitialState&, const InitialState&) = default;
};

struct RunSettings {
    double duration = 1.0;    ///< [s]
    int output_every = 1;     ///< steps between time-series rows
    int snapshot_every = 0;   ///< steps between snapshots, 0 disables them
    bool fixed_length = false;

    friend bool operator==(const RunSettings&, const RunSettings&) = default;
};

struct RunConfig {
    ModelParams model;
    InitialState initial;
    ControlInput control;
    RunSettings run;
    NewtonSettings newton;
    std::filesystem::path output_dir = "out";

    /// Throws ConfigError carrying the dotted field path of the first violation.
    void validate() const;
};

bool operator==(const ModelParams& a, const ModelParams& b);
bool operator==(const NewtonSettings& a, const NewtonSettings& b);
bool operator==(const RunConfig& a, const RunConfig& b);

enum class ScenarioPreset { Case1Fixed, Case2Deploy, Case3Retrieve };

/// Accepts "case1", "case2", "case3" and the long names "case1_fixed", ...
std::optional<ScenarioPreset> parse_preset(std::string_view name);
std::string_view preset_name(ScenarioPreset p);

/// Inertia about the attachment point of a homogeneous elliptic cylinder whose
/// axis is the body e3 axis, with semi-axes along body e1 and e2. The centre of
/// mass sits at rho_c from the attachment point.
Mat3 elliptic_cylinder_inertia(double mass, double semimajor, double semiminor, double height, const Vec3& rho_c);

RunConfig expand_preset(ScenarioPreset p);

/// Parses the sectioned key = value format. An optional `preset` key in [sim]
/// supplies defaults that the remaining keys override.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
/// Writes every field explicitly; parse_config(write_config(c)) == c.
std::string write_config(const RunConfig& c);

Configuration initial_configuration(const RunConfig& c);
Velocities initial_velocities(const RunConfig& c);
ReelMode reel_mode(const RunConfig& c);

/// Human-readable dump of the resolved parameters.
std::string describe(const RunConfig& c);

}  // namespace strpend
