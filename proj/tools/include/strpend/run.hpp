#pragma once

#include "strpend/config.hpp"
#include "strpend/diagnostics.hpp"
#include "strpend/errors.hpp"

#include <iosfwd>
#include <optional>

namespace strpend {

/// Output file could not be created or written.
class IoError : public Error {
public:
    using Error::Error;
};

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitSolver = 2, kExitIo = 3 };

/// Extremes over every step of a run, not only the written rows.
struct ConservationSummary {
    double e0 = 0.0;
    double max_abs_de = 0.0;
    double max_kinetic = 0.0;
    double pi3_0 = 0.0;
    double max_abs_dpi3 = 0.0;
    double max_balance_error = 0.0;  ///< |E - E0 - cum_dissipation - cum_control_work|
    double max_ortho_err = 0.0;
};

/// Body spin-up markers, for comparison with published plots.
struct TumbleReport {
    double threshold = 1.0;  ///< [rad/s]
    std::optional<double> t_first_above;
    double peak_omega = 0.0;
    double t_peak_omega = 0.0;
};

class RunStatistics {
public:
    void add(const StepRecord& r);

    const ConservationSummary& conservation() const noexcept { return c_; }
    const TumbleReport& tumble() const noexcept { return tumble_; }

private:
    bool first_ = true;
    ConservationSummary c_;
    TumbleReport tumble_;
};

struct RunResult {
    SimulationOutcome outcome;
    ConservationSummary conservation;
    TumbleReport tumble;
    double wall_time_s = 0.0;
    std::size_t rows_written = 0;
    std::size_t snapshots_written = 0;
    int exit_code = kExitOk;
};

/// Runs the configured simulation and writes timeseries.csv, snapshots/ and
/// run.json under c.output_dir. Solver failures are reported in the result;
/// I/O failures throw IoError.
RunResult run(const RunConfig& c, std::ostream& log);

/// Header line of timeseries.csv.
extern const char* const kTimeseriesHeader;

}  // namespace strpend
