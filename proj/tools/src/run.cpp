#include "strpend/run.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace strpend {

const char* const kTimeseriesHeader =
    "t,s_p,ds_p_rate,E,T,T_rot,V_grav,V_elastic,pi3,ortho_err,omega_x,omega_y,omega_z,newton_iters,"
    "cum_dissipation,cum_control_work";

void RunStatistics::add(const StepRecord& r) {
    if (first_) {
        c_.e0 = r.energy_total;
        c_.pi3_0 = r.pi3;
        first_ = false;
    }
    const double de = r.energy_total - c_.e0;
    c_.max_abs_de = std::max(c_.max_abs_de, std::abs(de));
    c_.max_kinetic = std::max(c_.max_kinetic, r.kinetic);
    c_.max_abs_dpi3 = std::max(c_.max_abs_dpi3, std::abs(r.pi3 - c_.pi3_0));
    c_.max_balance_error =
        std::max(c_.max_balance_error, std::abs(de - r.cum_dissipation - r.cum_control_work));
    c_.max_ortho_err = std::max(c_.max_ortho_err, r.ortho_err);

    const double w = r.omega.norm();
    if (w > tumble_.peak_omega) {
        tumble_.peak_omega = w;
        tumble_.t_peak_omega = r.t;
    }
    if (!tumble_.t_first_above && w >= tumble_.threshold) tumble_.t_first_above = r.t;
}

namespace {

namespace fs = std::filesystem;

class CsvWriter {
public:
    explicit CsvWriter(const fs::path& path) : path_(path), out_(path) {
        if (!out_) throw IoError("cannot create " + path.string());
    }

    CsvWriter& num(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return raw(buf);
    }

    CsvWriter& raw(std::string_view s) {
        if (!first_) out_ << ',';
        out_ << s;
        first_ = false;
        return *this;
    }

    void end_row() {
        out_ << '\n';
        first_ = true;
        if (!out_) throw IoError("write failed: " + path_.string());
    }

    void close() {
        out_.close();
        if (!out_) throw IoError("write failed: " + path_.string());
    }

private:
    fs::path path_;
    std::ofstream out_;
    bool first_ = true;
};

void write_snapshot(const fs::path& file, const Snapshot& s) {
    CsvWriter w(file);
    w.raw("index").raw("x").raw("y").raw("z").raw("strain").end_row();
    for (std::size_t i = 0; i < s.node_positions.size(); ++i) {
        const Vec3& r = s.node_positions[i];
        w.raw(std::to_string(i + 1)).num(r.x()).num(r.y()).num(r.z());
        if (i == 0) w.raw("");
        else w.num(s.element_strains[i - 1]);
        w.end_row();
    }
    w.raw("body");
    const Mat3& R = s.body_frame.matrix();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) w.num(R(i, j));
    w.num(s.body_com.x()).num(s.body_com.y()).num(s.body_com.z()).end_row();
    w.close();
}

const char* status_name(SimulationOutcome::Status s) {
    switch (s) {
        case SimulationOutcome::Status::Completed: return "completed";
        case SimulationOutcome::Status::SolverFailed: return "solver_failed";
        case SimulationOutcome::Status::ReelLimit: return "reel_limit";
        case SimulationOutcome::Status::ModelFailure: return "model_error";
    }
    return "unknown";
}

}  // namespace

RunResult run(const RunConfig& c, std::ostream& log) {
    c.validate();
    const fs::path dir = c.output_dir;
    const fs::path snap_dir = dir / "snapshots";
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    if (c.run.snapshot_every > 0) {
        fs::create_directories(snap_dir, ec);
        if (ec) throw IoError("cannot create " + snap_dir.string() + ": " + ec.message());
    }

    const ModelParams& p = c.model;
    const Configuration g0 = initial_configuration(c);
    const Velocities v0 = initial_velocities(c);
    SimulationSpec spec{c.run.duration, reel_mode(c), c.control, c.newton};
    const std::size_t steps = step_count(spec.duration, p.h());

    RunResult result;
    CsvWriter series(dir / "timeseries.csv");
    series.raw(kTimeseriesHeader).end_row();
    std::optional<CsvWriter> index;
    if (c.run.snapshot_every > 0) {
        index.emplace(snap_dir / "index.csv");
        index->raw("step").raw("t").raw("file").end_row();
    }

    Monitor monitor(p);
    RunStatistics stats;
    const auto every = static_cast<std::size_t>(c.run.output_every);
    const auto snap_every = static_cast<std::size_t>(c.run.snapshot_every);

    auto sink = [&](const StepEvent& e) {
        const StepRecord r = monitor.observe(e);
        stats.add(r);
        if (e.step % every == 0 || e.step == steps) {
            series.num(r.t).num(r.s_p).num(r.ds_p_rate).num(r.energy_total).num(r.kinetic).num(r.kinetic_rot);
            series.num(r.v_gravity).num(r.v_elastic).num(r.pi3).num(r.ortho_err);
            series.num(r.omega.x()).num(r.omega.y()).num(r.omega.z());
            series.raw(std::to_string(r.newton_iters)).num(r.cum_dissipation).num(r.cum_control_work).end_row();
            ++result.rows_written;
        }
        if (snap_every > 0 && e.step % snap_every == 0) {
            char name[32];
            std::snprintf(name, sizeof name, "snap_%06zu.csv", e.step);
            write_snapshot(snap_dir / name, make_snapshot(e.t, e.g, p));
            index->raw(std::to_string(e.step)).num(e.t).raw(name).end_row();
            ++result.snapshots_written;
        }
    };

    const auto start = std::chrono::steady_clock::now();
    result.outcome = simulate(p, g0, v0, spec, sink);
    result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    series.close();
    if (index) index->close();

    result.conservation = stats.conservation();
    result.tumble = stats.tumble();
    result.exit_code = result.outcome.ok() ? kExitOk : kExitSolver;

    const SimulationOutcome& o = result.outcome;
    nlohmann::ordered_json j;
    j["status"] = status_name(o.status);
    j["message"] = o.message;
    j["steps_requested"] = o.steps;
    j["steps_completed"] = o.steps_completed;
    j["failure_step"] = o.ok() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(o.failure_step);
    j["final_time"] = o.steps_completed == 0 ? 0.0 : static_cast<double>(o.steps_completed - 1) * p.h();
    j["final_s_p"] = o.final_g.s_p;
    j["warnings"] = o.warnings;
    j["wall_time_s"] = result.wall_time_s;
    j["newton"] = {
        {"total_iterations", o.stats.total_iterations},
        {"max_iterations", o.stats.max_iterations},
        {"mean_iterations", o.steps_completed ? static_cast<double>(o.stats.total_iterations) /
                                                    static_cast<double>(o.steps_completed)
                                              : 0.0},
        {"jacobian_evals", o.stats.jacobian_evals},
        {"residual_evals", o.stats.residual_evals},
    };
    const ConservationSummary& cs = result.conservation;
    j["conservation"] = {
        {"energy_initial", cs.e0},
        {"max_abs_energy_change", cs.max_abs_de},
        {"max_kinetic", cs.max_kinetic},
        {"energy_change_over_max_kinetic", cs.max_kinetic > 0 ? cs.max_abs_de / cs.max_kinetic : 0.0},
        {"pi3_initial", cs.pi3_0},
        {"max_abs_pi3_change", cs.max_abs_dpi3},
        {"max_energy_balance_error", cs.max_balance_error},
        {"max_orthogonality_error", cs.max_ortho_err},
    };
    j["tumble"] = {
        {"omega_threshold", result.tumble.threshold},
        {"t_first_above_threshold", result.tumble.t_first_above ? nlohmann::ordered_json(*result.tumble.t_first_above)
                                                                : nlohmann::ordered_json(nullptr)},
        {"peak_omega", result.tumble.peak_omega},
        {"t_peak_omega", result.tumble.t_peak_omega},
    };
    {
        std::ofstream out(dir / "run.json");
        if (!out) throw IoError("cannot create " + (dir / "run.json").string());
        out << j.dump(2) << '\n';
        if (!out) throw IoError("write failed: " + (dir / "run.json").string());
    }

    for (const auto& w : o.warnings) log << "warning: " << w << '\n';
    log << "status: " << status_name(o.status) << " (" << o.steps_completed << " of " << o.steps + 1
        << " steps solved, " << result.wall_time_s << " s)\n";
    if (!o.ok()) log << "error: " << o.message << '\n';
    return result;
}

}  // namespace strpend
