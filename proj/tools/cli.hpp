#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "cspimp/csp.hpp"
#include "json.hpp"

namespace cspimp::cli {

inline constexpr const char* report_schema = "cspimp-report/1";

enum class InstanceFormat { json, dimacs };

struct LoadedInstance {
  CspInstance instance;
  ConstraintLanguage language;
  nlohmann::json metadata;
};

/// Throws InvalidArgument naming the offending field (json) or line (dimacs).
LoadedInstance parse_instance_text(const std::string& text, InstanceFormat format);
/// Format defaults to the extension: .cnf and .dimacs are DIMACS, anything else JSON.
LoadedInstance parse_instance(const std::string& path, std::optional<InstanceFormat> format = std::nullopt);

nlohmann::json instance_to_json(const CspInstance& inst, const ConstraintLanguage& lang);

/// Whole command line; returns the process exit code.
/// 0 success (NotIn included), 1 usage or input error, 2 budget or limit, 3 unsupported class.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cspimp::cli
