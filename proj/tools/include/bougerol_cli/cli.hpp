#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bougerol::cli {

/// Environment variable that overrides the default seed.
inline constexpr const char* kSeedEnv = "BOUGEROL_SEED";

enum class Command { verify_boug, verify_bdy, verify_main, verify_second, verify_reversal, density, mellin, sde_check };
enum class Format { json, csv };

const char* command_name(Command c) noexcept;
std::optional<Command> parse_command(const std::string& name) noexcept;

struct RunConfig {
  Command command = Command::verify_boug;
  double t = 1.0;
  double x = 0.0;
  std::uint64_t n_mc = 100000;
  std::uint64_t n_steps = 4096;
  std::uint64_t seed = 0;
  Format format = Format::json;
  std::string output_path = "-";  ///< "-" writes to stdout
  unsigned threads = 0;           ///< 0 = hardware concurrency
  double v_min = 0.1;
  double v_max = 5.0;
  std::uint64_t points = 100;
  double nu = 1.5;
  double tol = 1e-10;
};

struct ParseResult {
  std::optional<RunConfig> config;
  std::vector<std::string> errors;  ///< one entry per invalid flag
  bool help = false;
  std::string usage;
};

/// Never throws. `args` excludes the program name; `seed_env` is the value
/// of kSeedEnv if set.
ParseResult parse_flags(const std::vector<std::string>& args, const char* seed_env = nullptr);

/// One flat record per report; keys are snake_case.
using Rows = std::vector<nlohmann::ordered_json>;

/// Executes cfg.command. `all_passed` receives the overall verdict.
Rows execute(const RunConfig& cfg, bool& all_passed);

std::string render(const Rows& rows, Format format);

/// Full driver: parse, execute, write. Returns the process exit code
/// (0 pass, 1 usage or input error, 2 statistical failure).
int run(const std::vector<std::string>& args, const char* seed_env, std::ostream& out, std::ostream& err);

}  // namespace bougerol::cli
