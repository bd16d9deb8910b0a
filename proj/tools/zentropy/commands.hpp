#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace zentropy::cli {

// Malformed or incomplete configuration / unreadable input. Exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A report was requested for a directory without a usable run. Exit code 1.
class MissingRun : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

struct Invocation {
  std::string subcommand;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> input;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
};

struct RunConfig {
  std::string subcommand;
  nlohmann::json doc;  // effective config, seed resolved
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  bool write_csv = true;
  bool write_json = true;
  double tolerance = 0.01;
  std::string config_hash;
};

// Fixed 9-significant-digit rendering; |v| < 1e-12 prints as 0.
std::string format_number(double v);

// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string hash_config(const nlohmann::json& doc);

RunConfig load_config(const Invocation& inv);

void cmd_gridworld(const RunConfig& cfg, std::ostream& log);
void cmd_train(const RunConfig& cfg, std::ostream& log);
void cmd_bayes(const RunConfig& cfg, std::ostream& log);
void cmd_anomaly(const RunConfig& cfg, std::istream& input, std::ostream& log);
void cmd_report(const std::filesystem::path& run_dir, std::ostream& out);

// Dispatches one invocation and maps failures onto the exit-code contract.
int run(const Invocation& inv, std::ostream& out, std::ostream& err);

}  // namespace zentropy::cli
