#include "strpend/cli.hpp"

#include "strpend/config.hpp"
#include "strpend/run.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace strpend {

namespace {

namespace fs = std::filesystem;

int execute(const RunConfig& c, bool dry_run, std::ostream& out, std::ostream& err) {
    if (dry_run) {
        out << describe(c);
        return kExitOk;
    }
    try {
        return run(c, out).exit_code;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    }
}

int sweep(const fs::path& dir, const fs::path& out_root, unsigned jobs, std::ostream& out, std::ostream& err) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        err << "sweep: not a directory: " << dir.string() << '\n';
        return kExitIo;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".ini" || ext == ".cfg" || ext == ".conf")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        err << "sweep: no .ini/.cfg/.conf files in " << dir.string() << '\n';
        return kExitConfig;
    }

    // Load everything first so a bad file fails the sweep before any run starts.
    std::vector<RunConfig> configs;
    for (const auto& f : files) {
        try {
            RunConfig c = load_config(f);
            c.output_dir = out_root / f.stem();
            configs.push_back(std::move(c));
        } catch (const ConfigError& e) {
            err << f.string() << ": " << e.what() << '\n';
            return kExitConfig;
        }
    }

    std::vector<int> codes(configs.size(), kExitOk);
    std::vector<std::string> logs(configs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            std::ostringstream log;
            std::ostringstream elog;
            codes[i] = execute(configs[i], false, log, elog);
            logs[i] = log.str() + elog.str();
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    int worst = kExitOk;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        out << "== " << files[i].filename().string() << " -> " << configs[i].output_dir.string() << '\n' << logs[i];
        worst = std::max(worst, codes[i]);
    }
    return worst;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"strpend: variational simulation of a string pendulum with a reel"};
    app.require_subcommand(1);

    std::string config_path;
    bool dry_run = false;
    auto* run_cmd = app.add_subcommand("run", "Run a simulation from a config file");
    run_cmd->add_option("config", config_path, "Config file")->required();
    run_cmd->add_flag("--dry-run", dry_run, "Validate and print the resolved parameters without running");

    std::string preset;
    std::string out_dir;
    double duration = 0.0;
    int steps_per_output = 0;
    int snapshot_every = -1;
    bool print_config = false;
    auto* preset_cmd = app.add_subcommand("preset", "Run one of the built-in scenarios");
    preset_cmd->add_option("name", preset, "case1 | case2 | case3")->required();
    preset_cmd->add_option("--out", out_dir, "Output directory");
    preset_cmd->add_option("--duration", duration, "Simulated time [s]");
    preset_cmd->add_option("--steps-per-output", steps_per_output, "Steps between time-series rows");
    preset_cmd->add_option("--snapshot-every", snapshot_every, "Steps between snapshots (0 disables)");
    preset_cmd->add_flag("--print-config", print_config, "Print the preset as a config file and exit");
    preset_cmd->add_flag("--dry-run", dry_run, "Print the resolved parameters without running");

    auto* validate_cmd = app.add_subcommand("validate", "Check a config file");
    validate_cmd->add_option("config", config_path, "Config file")->required();

    std::string sweep_dir;
    std::string sweep_out;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* sweep_cmd = app.add_subcommand("sweep", "Run every config in a directory, one simulation per worker");
    sweep_cmd->add_option("dir", sweep_dir, "Directory of .ini/.cfg/.conf files")->required();
    sweep_cmd->add_option("--out", sweep_out, "Root of the per-run output directories (default <dir>/sweep_out)");
    sweep_cmd->add_option("--jobs,-j", jobs, "Concurrent simulations")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run_cmd) return execute(load_config(config_path), dry_run, out, err);

        if (*validate_cmd) {
            const RunConfig c = load_config(config_path);
            out << "ok: " << config_path << '\n' << describe(c);
            return kExitOk;
        }

        if (*preset_cmd) {
            const auto p = parse_preset(preset);
            if (!p) {
                err << "unknown preset '" << preset << "' (expected case1, case2 or case3)\n";
                return kExitConfig;
            }
            RunConfig c = expand_preset(*p);
            if (!out_dir.empty()) c.output_dir = out_dir;
            if (preset_cmd->count("--duration")) c.run.duration = duration;
            if (preset_cmd->count("--steps-per-output")) c.run.output_every = steps_per_output;
            if (preset_cmd->count("--snapshot-every")) c.run.snapshot_every = snapshot_every;
            c.validate();
            if (print_config) {
                out << write_config(c);
                return kExitOk;
            }
            return execute(c, dry_run, out, err);
        }

        if (*sweep_cmd) {
            const fs::path root = sweep_out.empty() ? fs::path(sweep_dir) / "sweep_out" : fs::path(sweep_out);
            return sweep(sweep_dir, root, jobs, out, err);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitConfig;
}

}  // namespace strpend
