#include "strpend/config.hpp"

#include "strpend/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace strpend {

bool operator==(const ModelParams& a, const ModelParams& b) {
    return a.reel.r_d == b.reel.r_d && a.reel.d == b.reel.d && a.reel.kappa_d == b.reel.kappa_d &&
           a.reel.b == b.reel.b && a.string.mu == b.string.mu && a.string.ea == b.string.ea &&
           a.string.total_length == b.string.total_length && a.body.mass == b.body.mass &&
           a.body.inertia == b.body.inertia && a.body.rho_c == b.body.rho_c && a.env.gravity == b.env.gravity &&
           a.env.r_p == b.env.r_p && a.disc.n_elements == b.disc.n_elements &&
           a.disc.time_step == b.disc.time_step;
}

bool operator==(const NewtonSettings& a, const NewtonSettings& b) {
    return a.tol == b.tol && a.max_iter == b.max_iter && a.fd_step == b.fd_step &&
           a.jacobian_reuse == b.jacobian_reuse;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.model == b.model && a.initial == b.initial && a.control == b.control && a.run == b.run &&
           a.newton == b.newton && a.output_dir == b.output_dir;
}

std::optional<ScenarioPreset> parse_preset(std::string_view name) {
    if (name == "case1" || name == "case1_fixed") return ScenarioPreset::Case1Fixed;
    if (name == "case2" || name == "case2_deploy") return ScenarioPreset::Case2Deploy;
    if (name == "case3" || name == "case3_retrieve") return ScenarioPreset::Case3Retrieve;
    return std::nullopt;
}

std::string_view preset_name(ScenarioPreset p) {
    switch (p) {
        case ScenarioPreset::Case1Fixed: return "case1";
        case ScenarioPreset::Case2Deploy: return "case2";
        case ScenarioPreset::Case3Retrieve: return "case3";
    }
    return "case1";
}

Mat3 elliptic_cylinder_inertia(double mass, double semimajor, double semiminor, double height, const Vec3& rho_c) {
    const double a2 = semimajor * semimajor;
    const double b2 = semiminor * semiminor;
    const double h2 = height * height;
    Mat3 jc = Mat3::Zero();
    jc(0, 0) = mass * (b2 / 4.0 + h2 / 12.0);
    jc(1, 1) = mass * (a2 / 4.0 + h2 / 12.0);
    jc(2, 2) = mass * (a2 + b2) / 4.0;
    return jc + mass * (rho_c.squaredNorm() * Mat3::Identity() - rho_c * rho_c.transpose());
}

RunConfig expand_preset(ScenarioPreset preset) {
    RunConfig c;
    ModelParams& m = c.model;
    m.reel = ReelParams{Vec3::Zero(), 0.5, 1.0, 0.5};
    m.string = StringParams{0.025, 40.0, 100.0};
    m.body.mass = 0.1;
    m.body.rho_c = Vec3(0.3, 0.2, 0.4);
    m.body.inertia = elliptic_cylinder_inertia(m.body.mass, 0.5, 0.4, 0.8, m.body.rho_c);
    m.env = Environment{9.81, Vec3::Zero()};
    m.disc = Discretization{20, 0.0005};

    c.initial.s_p_rate = 0.0;
    c.initial.velocities.kind = NodeVelocities::Kind::TipOnly;
    c.initial.velocities.tip = Vec3(0.0, 0.5, 0.0);
    c.initial.R0 = Rotation::identity();
    c.initial.omega0 = Vec3::Zero();
    c.initial.layout.kind = NodeLayout::Kind::Line;
    c.initial.layout.direction = Vec3::UnitX();

    // The scenarios track conserved quantities to ~1e-11 relative, which needs
    // a tighter solve than the library default.
    c.newton = NewtonSettings{};
    c.newton.tol = 1e-13;
    c.run.output_every = 20;
    c.run.snapshot_every = 200;

    switch (preset) {
        case ScenarioPreset::Case1Fixed:
            c.initial.s_p0 = 90.0;
            c.run.fixed_length = true;
            c.run.duration = 10.0;
            c.control = ControlInput::none();
            break;
        case ScenarioPreset::Case2Deploy:
            c.initial.s_p0 = 99.0;
            c.run.duration = 8.0;
            c.control = ControlInput::constant(0.0);
            break;
        case ScenarioPreset::Case3Retrieve: {
            const double angle = 15.0 * std::numbers::pi / 180.0;
            c.initial.s_p0 = 90.0;
            c.initial.layout.direction = Vec3(std::sin(angle), 0.0, std::cos(angle));
            c.run.duration = 10.0;
            c.control = ControlInput::constant(2.09);
            break;
        }
    }
    c.output_dir = std::string("out_") + std::string(preset_name(preset));
    return c;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(const Vec3& v) {
    return fmt(v.x()) + " " + fmt(v.y()) + " " + fmt(v.z());
}

std::string fmt(const Mat3& m) {
    std::string s;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (!s.empty()) s += ' ';
            s += fmt(m(i, j));
        }
    }
    return s;
}

std::string fmt_list(const std::vector<Vec3>& list) {
    std::string s;
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (i) s += "; ";
        s += fmt(list[i]);
    }
    return s;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;

    std::string path() const { return section + "." + key; }
};

[[noreturn]] void fail(const Entry& e, const std::string& msg) {
    throw ConfigError("line " + std::to_string(e.line) + ": " + e.path() + ": " + msg, e.line, e.path());
}

std::vector<double> numbers(const Entry& e, std::string_view text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (true) {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == ',')) ++pos;
        if (pos >= text.size()) break;
        double v = 0.0;
        const char* first = text.data() + pos;
        const char* last = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || (ptr != last && *ptr != ' ' && *ptr != '\t' && *ptr != ',')) {
            fail(e, "expected a number in '" + std::string(text) + "'");
        }
        if (!std::isfinite(v)) fail(e, "value must be finite");
        out.push_back(v);
        pos = static_cast<std::size_t>(ptr - text.data());
    }
    return out;
}

double real(const Entry& e) {
    const auto v = numbers(e, e.value);
    if (v.size() != 1) fail(e, "expected one number");
    return v[0];
}

int integer(const Entry& e) {
    int v = 0;
    const std::string_view s = e.value;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail(e, "expected an integer");
    return v;
}

bool boolean(const Entry& e) {
    if (e.value == "true" || e.value == "yes" || e.value == "on" || e.value == "1") return true;
    if (e.value == "false" || e.value == "no" || e.value == "off" || e.value == "0") return false;
    fail(e, "expected true or false");
}

Vec3 vec3(const Entry& e) {
    const auto v = numbers(e, e.value);
    if (v.size() != 3) fail(e, "expected three numbers");
    return Vec3(v[0], v[1], v[2]);
}

Mat3 mat3(const Entry& e) {
    const auto v = numbers(e, e.value);
    if (v.size() != 9) fail(e, "expected nine numbers (row-major)");
    Mat3 m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = v[static_cast<std::size_t>(i)];
    return m;
}

std::vector<std::vector<double>> rows(const Entry& e, std::size_t width) {
    std::vector<std::vector<double>> out;
    std::string_view rest = e.value;
    while (!rest.empty()) {
        const auto semi = rest.find(';');
        const std::string_view item = trim(rest.substr(0, semi));
        rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
        if (item.empty()) continue;
        auto v = numbers(e, item);
        if (v.size() != width) fail(e, "each ';'-separated item needs " + std::to_string(width) + " numbers");
        out.push_back(std::move(v));
    }
    if (out.empty()) fail(e, "empty list");
    return out;
}

std::vector<Vec3> vec3_list(const Entry& e) {
    std::vector<Vec3> out;
    for (const auto& r : rows(e, 3)) out.emplace_back(r[0], r[1], r[2]);
    return out;
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"sim", {"preset", "n_elements", "time_step", "duration", "gravity", "r_p", "fixed_length"}},
        {"reel", {"r_d", "d", "kappa_d", "b"}},
        {"string", {"mu", "ea", "length"}},
        {"body", {"mass", "inertia", "rho_c"}},
        {"initial", {"s_p", "direction", "spacing", "nodes", "s_p_rate", "tip_velocity", "node_velocities", "R0",
                     "omega0"}},
        {"control", {"mode", "value", "table"}},
        {"newton", {"tol", "max_iter", "fd_step", "jacobian_reuse"}},
        {"output", {"dir", "output_every", "snapshot_every"}},
    };
    return s;
}

std::vector<Entry> tokenize(std::string_view text) {
    std::vector<Entry> entries;
    std::set<std::string> seen;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header", line_no);
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!schema().contains(section)) {
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section + "]", line_no,
                                  section);
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'", line_no);
        }
        if (section.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": key outside of any section", line_no);
        }
        Entry e{section, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), line_no};
        if (!schema().at(section).contains(e.key)) fail(e, "unknown key");
        if (!seen.insert(e.path()).second) fail(e, "duplicate key");
        if (e.value.empty()) fail(e, "missing value");
        entries.push_back(std::move(e));
    }
    return entries;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    const std::vector<Entry> entries = tokenize(text);

    RunConfig c;
    for (const auto& e : entries) {
        if (e.path() == "sim.preset") {
            const auto p = parse_preset(e.value);
            if (!p) fail(e, "unknown preset '" + e.value + "'");
            c = expand_preset(*p);
        }
    }

    std::optional<std::string> control_mode;
    std::optional<double> control_value;
    std::optional<std::vector<std::pair<double, double>>> control_table;
    const Entry* layout_line = nullptr;
    const Entry* layout_nodes = nullptr;
    const Entry* vel_tip = nullptr;
    const Entry* vel_nodes = nullptr;

    ModelParams& m = c.model;
    for (const auto& e : entries) {
        const std::string& s = e.section;
        const std::string& k = e.key;
        if (s == "sim") {
            if (k == "preset") continue;
            if (k == "n_elements") m.disc.n_elements = integer(e);
            else if (k == "time_step") m.disc.time_step = real(e);
            else if (k == "duration") c.run.duration = real(e);
            else if (k == "gravity") m.env.gravity = real(e);
            else if (k == "r_p") m.env.r_p = vec3(e);
            else if (k == "fixed_length") c.run.fixed_length = boolean(e);
        } else if (s == "reel") {
            if (k == "r_d") m.reel.r_d = vec3(e);
            else if (k == "d") m.reel.d = real(e);
            else if (k == "kappa_d") m.reel.kappa_d = real(e);
            else if (k == "b") m.reel.b = real(e);
        } else if (s == "string") {
            if (k == "mu") m.string.mu = real(e);
            else if (k == "ea") m.string.ea = real(e);
            else if (k == "length") m.string.total_length = real(e);
        } else if (s == "body") {
            if (k == "mass") m.body.mass = real(e);
            else if (k == "inertia") m.body.inertia = mat3(e);
            else if (k == "rho_c") m.body.rho_c = vec3(e);
        } else if (s == "initial") {
            InitialState& in = c.initial;
            if (k == "s_p") {
                in.s_p0 = real(e);
            } else if (k == "direction") {
                in.layout.direction = vec3(e);
                layout_line = &e;
            } else if (k == "spacing") {
                in.layout.spacing = real(e);
                layout_line = &e;
            } else if (k == "nodes") {
                in.layout.nodes = vec3_list(e);
                layout_nodes = &e;
            } else if (k == "s_p_rate") {
                in.s_p_rate = real(e);
            } else if (k == "tip_velocity") {
                in.velocities.tip = vec3(e);
                vel_tip = &e;
            } else if (k == "node_velocities") {
                in.velocities.nodes = vec3_list(e);
                vel_nodes = &e;
            } else if (k == "R0") {
                try {
                    in.R0 = Rotation::from_matrix(mat3(e));
                } catch (const ModelError& err) {
                    fail(e, err.what());
                }
            } else if (k == "omega0") {
                in.omega0 = vec3(e);
            }
        } else if (s == "control") {
            if (k == "mode") {
                if (e.value != "none" && e.value != "constant" && e.value != "tabulated") {
                    fail(e, "expected none, constant or tabulated");
                }
                control_mode = e.value;
            } else if (k == "value") {
                control_value = real(e);
            } else if (k == "table") {
                std::vector<std::pair<double, double>> t;
                for (const auto& r : rows(e, 2)) t.emplace_back(r[0], r[1]);
                control_table = std::move(t);
            }
        } else if (s == "newton") {
            if (k == "tol") c.newton.tol = real(e);
            else if (k == "max_iter") c.newton.max_iter = integer(e);
            else if (k == "fd_step") c.newton.fd_step = real(e);
            else if (k == "jacobian_reuse") c.newton.jacobian_reuse = integer(e);
        } else if (s == "output") {
            if (k == "dir") c.output_dir = e.value;
            else if (k == "output_every") c.run.output_every = integer(e);
            else if (k == "snapshot_every") c.run.snapshot_every = integer(e);
        }
    }

    if (layout_line && layout_nodes) fail(*layout_nodes, "conflicts with initial.direction/initial.spacing");
    if (layout_nodes) {
        c.initial.layout.kind = NodeLayout::Kind::Explicit;
        c.initial.layout.spacing.reset();
        c.initial.layout.direction = Vec3::UnitX();
    } else if (layout_line) {
        c.initial.layout.kind = NodeLayout::Kind::Line;
        c.initial.layout.nodes.clear();
    }
    if (vel_tip && vel_nodes) fail(*vel_nodes, "conflicts with initial.tip_velocity");
    if (vel_nodes) {
        c.initial.velocities.kind = NodeVelocities::Kind::Explicit;
        c.initial.velocities.tip = Vec3::Zero();
    } else if (vel_tip) {
        c.initial.velocities.kind = NodeVelocities::Kind::TipOnly;
        c.initial.velocities.nodes.clear();
    }

    if (control_mode || control_value || control_table) {
        std::string mode = control_mode.value_or("");
        if (mode.empty()) {
            switch (c.control.mode()) {
                case ControlInput::Mode::None: mode = control_table ? "tabulated" : "constant"; break;
                case ControlInput::Mode::Constant: mode = "constant"; break;
                case ControlInput::Mode::Tabulated: mode = "tabulated"; break;
            }
        }
        try {
            if (mode == "none") {
                if (control_value || control_table) throw ConfigError("control.mode = none takes no value or table", 0, "control.mode");
                c.control = ControlInput::none();
            } else if (mode == "constant") {
                if (control_table) throw ConfigError("control.table requires mode = tabulated", 0, "control.table");
                if (!control_value && c.control.mode() != ControlInput::Mode::Constant) {
                    throw ConfigError("control.value is required for mode = constant", 0, "control.value");
                }
                c.control = ControlInput::constant(control_value.value_or(c.control.value()));
            } else {
                if (control_value) throw ConfigError("control.value requires mode = constant", 0, "control.value");
                if (!control_table && c.control.mode() != ControlInput::Mode::Tabulated) {
                    throw ConfigError("control.table is required for mode = tabulated", 0, "control.table");
                }
                c.control = ControlInput::tabulated(control_table.value_or(c.control.table()));
            }
        } catch (const ModelError& err) {
            throw ConfigError(err.what(), 0, err.field());
        }
    }

    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string write_config(const RunConfig& c) {
    const ModelParams& m = c.model;
    std::ostringstream os;
    os << "[sim]\n"
       << "n_elements = " << m.disc.n_elements << "\n"
       << "time_step = " << fmt(m.disc.time_step) << "\n"
       << "duration = " << fmt(c.run.duration) << "\n"
       << "gravity = " << fmt(m.env.gravity) << "\n"
       << "r_p = " << fmt(m.env.r_p) << "\n"
       << "fixed_length = " << (c.run.fixed_length ? "true" : "false") << "\n\n";
    os << "[reel]\n"
       << "r_d = " << fmt(m.reel.r_d) << "\n"
       << "d = " << fmt(m.reel.d) << "\n"
       << "kappa_d = " << fmt(m.reel.kappa_d) << "\n"
       << "b = " << fmt(m.reel.b) << "\n\n";
    os << "[string]\n"
       << "mu = " << fmt(m.string.mu) << "\n"
       << "ea = " << fmt(m.string.ea) << "\n"
       << "length = " << fmt(m.string.total_length) << "\n\n";
    os << "[body]\n"
       << "mass = " << fmt(m.body.mass) << "\n"
       << "inertia = " << fmt(m.body.inertia) << "\n"
       << "rho_c = " << fmt(m.body.rho_c) << "\n\n";

    const InitialState& in = c.initial;
    os << "[initial]\n"
       << "s_p = " << fmt(in.s_p0) << "\n";
    if (in.layout.kind == NodeLayout::Kind::Line) {
        os << "direction = " << fmt(in.layout.direction) << "\n";
        if (in.layout.spacing) os << "spacing = " << fmt(*in.layout.spacing) << "\n";
    } else {
        os << "nodes = " << fmt_list(in.layout.nodes) << "\n";
    }
    os << "s_p_rate = " << fmt(in.s_p_rate) << "\n";
    if (in.velocities.kind == NodeVelocities::Kind::TipOnly) {
        os << "tip_velocity = " << fmt(in.velocities.tip) << "\n";
    } else {
        os << "node_velocities = " << fmt_list(in.velocities.nodes) << "\n";
    }
    os << "R0 = " << fmt(in.R0.matrix()) << "\n"
       << "omega0 = " << fmt(in.omega0) << "\n\n";

    os << "[control]\n";
    switch (c.control.mode()) {
        case ControlInput::Mode::None: os << "mode = none\n"; break;
        case ControlInput::Mode::Constant: os << "mode = constant\nvalue = " << fmt(c.control.value()) << "\n"; break;
        case ControlInput::Mode::Tabulated: {
            os << "mode = tabulated\ntable = ";
            const auto& t = c.control.table();
            for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "; " : "") << fmt(t[i].first) << " " << fmt(t[i].second);
            os << "\n";
            break;
        }
    }
    os << "\n[newton]\n"
       << "tol = " << fmt(c.newton.tol) << "\n"
       << "max_iter = " << c.newton.max_iter << "\n"
       << "fd_step = " << fmt(c.newton.fd_step) << "\n"
       << "jacobian_reuse = " << c.newton.jacobian_reuse << "\n\n";
    os << "[output]\n"
       << "dir = " << c.output_dir.string() << "\n"
       << "output_every = " << c.run.output_every << "\n"
       << "snapshot_every = " << c.run.snapshot_every << "\n";
    return os.str();
}

Configuration initial_configuration(const RunConfig& c) {
    const ModelParams& m = c.model;
    const std::size_t n = m.n_elements();
    Configuration g;
    g.s_p = c.initial.s_p0;
    g.R = c.initial.R0;
    if (c.initial.layout.kind == NodeLayout::Kind::Explicit) {
        g.q = c.initial.layout.nodes;
    } else {
        const Vec3 dir = c.initial.layout.direction.normalized();
        const double spacing = c.initial.layout.spacing.value_or((m.string.total_length - g.s_p) / m.disc.n_elements);
        g.q.resize(n + 1);
        for (std::size_t a = 0; a <= n; ++a) g.q[a] = spacing * static_cast<double>(a) * dir;
    }
    return g;
}

Velocities initial_velocities(const RunConfig& c) {
    const std::size_t n = c.model.n_elements();
    Velocities v;
    v.s_p_rate = c.initial.s_p_rate;
    v.omega = c.initial.omega0;
    if (c.initial.velocities.kind == NodeVelocities::Kind::Explicit) {
        v.q_rate = c.initial.velocities.nodes;
    } else {
        v.q_rate.assign(n + 1, Vec3::Zero());
        v.q_rate[n] = c.initial.velocities.tip;
    }
    return v;
}

ReelMode reel_mode(const RunConfig& c) {
    return c.run.fixed_length ? ReelMode::FixedLength : ReelMode::Free;
}

void RunConfig::validate() const {
    auto as_config = [](const ModelError& e) { return ConfigError(e.what(), 0, e.field()); };
    try {
        model.validate();
        newton.validate();
    } catch (const ModelError& e) {
        throw as_config(e);
    }
    if (!(std::isfinite(run.duration) && run.duration > 0.0)) {
        throw ConfigError("run.duration: must be positive", 0, "run.duration");
    }
    if (run.output_every < 1) throw ConfigError("output.output_every: must be at least 1", 0, "output.output_every");
    if (run.snapshot_every < 0) {
        throw ConfigError("output.snapshot_every: must be non-negative", 0, "output.snapshot_every");
    }
    if (output_dir.empty()) throw ConfigError("output.dir: must not be empty", 0, "output.dir");

    const std::size_t n = model.n_elements();
    const InitialState& in = initial;
    if (!std::isfinite(in.s_p0)) throw ConfigError("initial.s_p: must be finite", 0, "initial.s_p");
    try {
        check_reel_limits(in.s_p0, model);
    } catch (const ReelLimitError& e) {
        throw ConfigError(std::string("initial.s_p: ") + e.what(), 0, "initial.s_p");
    }
    if (in.layout.kind == NodeLayout::Kind::Line) {
        if (!(in.layout.direction.allFinite() && in.layout.direction.norm() > 0.0)) {
            throw ConfigError("initial.direction: must be a finite non-zero vector", 0, "initial.direction");
        }
        if (in.layout.spacing && !(std::isfinite(*in.layout.spacing) && *in.layout.spacing > 0.0)) {
            throw ConfigError("initial.spacing: must be positive", 0, "initial.spacing");
        }
    } else if (in.layout.nodes.size() != n + 1) {
        throw ConfigError("initial.nodes: expected " + std::to_string(n + 1) + " nodes", 0, "initial.nodes");
    }
    if (in.velocities.kind == NodeVelocities::Kind::Explicit) {
        if (in.velocities.nodes.size() != n + 1) {
            throw ConfigError("initial.node_velocities: expected " + std::to_string(n + 1) + " entries", 0,
                              "initial.node_velocities");
        }
        if (!in.velocities.nodes[0].isZero(0.0)) {
            throw ConfigError("initial.node_velocities: the guide way node must be at rest", 0,
                              "initial.node_velocities");
        }
    }
    if (!std::isfinite(in.s_p_rate)) throw ConfigError("initial.s_p_rate: must be finite", 0, "initial.s_p_rate");
    if (run.fixed_length && in.s_p_rate != 0.0) {
        throw ConfigError("initial.s_p_rate: must be zero in fixed-length mode", 0, "initial.s_p_rate");
    }
    try {
        const Configuration g = initial_configuration(*this);
        check_configuration(g, model);
        for (std::size_t e = 0; e < n; ++e) {
            if (!((g.q[e + 1] - g.q[e]).norm() > 0.0)) {
                throw ConfigError("initial.nodes: element " + std::to_string(e + 1) + " has coincident nodes", 0,
                                  "initial.nodes");
            }
        }
    } catch (const ModelError& e) {
        const std::string field = e.field() == "configuration.q" ? "initial.nodes" : "initial.s_p";
        throw ConfigError(field + ": " + e.what(), 0, field);
    }
}

std::string describe(const RunConfig& c) {
    std::ostringstream os;
    const double l0 = (c.model.string.total_length - c.initial.s_p0) / c.model.disc.n_elements;
    std::string warning;
    const std::size_t steps = step_count(c.run.duration, c.model.h(), &warning);
    os << "# resolved configuration\n"
       << "# element length l0 = " << fmt(l0) << " m, steps = " << steps
       << ", unknowns = " << unknown_size(c.model.n_elements(), reel_mode(c)) << "\n";
    if (!warning.empty()) os << "# warning: " << warning << "\n";
    os << write_config(c);
    return os.str();
}

}  // namespace strpend
