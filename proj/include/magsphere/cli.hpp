#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include <magsphere/atlas.hpp>
#include <magsphere/core.hpp>

namespace magsphere {

/// Everything a command needs; serializes losslessly to JSON.
struct RunConfig {
    std::string command;
    SystemParams params;
    /// "cot" or "custom-table".
    std::string potential = "cot";
    std::string potential_file;
    std::optional<double> q;
    std::optional<Axis> grid_q;
    std::optional<Axis> grid_B;
    double dt = 1e-3;
    double t_end = 10.0;
    /// Invariant-drift bound for simulate.
    double tol = 1e-8;
    Tolerances tolerances;
    std::string output_path;
    /// "csv" or "json"; empty selects the command default.
    std::string format;
    int workers = 1;
    double m1 = 0.0, m2 = 0.0, m3 = 0.0, p = 0.0;
    bool full = false;
    bool project = false;
    std::string family = "auto";
    std::string diagram;
    std::string slopes = "0,1,2";
    std::string timestamp;

    bool operator==(const RunConfig &) const = default;
};

nlohmann::json to_json(const RunConfig &c);
/// Fields missing from j keep their value in base.
RunConfig run_config_from_json(const nlohmann::json &j, RunConfig base = {});

enum ExitCode : int { ExitOk = 0, ExitConfig = 1, ExitRuntime = 2 };

int cmd_simulate(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_equilibria(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_stability(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_atlas(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_reconstruct(const RunConfig &cfg, std::ostream &out, std::ostream &err);

/// Parses flags (and an optional --config file, whose values override flags) and dispatches.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace magsphere
