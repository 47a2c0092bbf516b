#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace sqrs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitInternal = 3;

struct RunContext {
    std::uint64_t seed = 1;
    std::string out_dir = "out";
};

/// Each command reads its own section layout from `config` (the whole file) and writes
/// into ctx.out_dir. Returns an exit code; configuration problems throw ConfigError.
int cmd_simulate(const nlohmann::json &config, const RunContext &ctx);
int cmd_security_map(const nlohmann::json &config, const RunContext &ctx);
int cmd_optimize(const nlohmann::json &config, const RunContext &ctx);
int cmd_fisher(const nlohmann::json &config, const RunContext &ctx);
int cmd_figure(int figure_id, const nlohmann::json &config, const RunContext &ctx);

/// Full command-line entry point: parses arguments, dispatches, maps errors to exit codes.
int run(int argc, char **argv);

}  // namespace sqrs::cli
