#ifndef NCST_CLI_COMMANDS_HPP
#define NCST_CLI_COMMANDS_HPP

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace ncst::cli {

inline constexpr const char* kVersion = "0.1.0";

/// One verified quantity. Non-gating checks are reported but never change the exit code.
struct Check {
  std::string name;
  std::string tag;
  double value = 0;
  double tolerance = 0;
  bool passed = false;
  bool gating = true;
  std::string note;
};

struct Result {
  std::string csv;
  std::vector<Check> checks;
  nlohmann::json details = nlohmann::json::object();
  bool passed() const {
    for (const auto& c : checks)
      if (c.gating && !c.passed) return false;
    return true;
  }
};

struct ParamDef {
  std::string key;
  double value;
  bool integer;
  std::string help;
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<ParamDef> params;  // command-specific, in addition to tol, grid, seed
  std::vector<std::string> tags;
};

const std::vector<CommandSpec>& commands();
const CommandSpec& command(const std::string& name);

/// Defaults merged with `overrides`; unknown keys and bad types throw std::invalid_argument.
nlohmann::json resolve_params(const std::string& name, const nlohmann::json& overrides = nlohmann::json::object());

/// Pure function of (name, params); parameter range errors throw std::domain_error.
Result execute(const std::string& name, const nlohmann::json& params);

nlohmann::json make_manifest(const std::string& name, const nlohmann::json& params, const Result& r, double wall_seconds);

/// Shortest round-trip form with 17 significant digits, locale independent.
std::string format_double(double v);

/// Full command line entry. Exit codes: 0 pass, 1 tolerance failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ncst::cli

#endif
