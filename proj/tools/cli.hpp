#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace utm::cli {

/// Runs one subcommand. `args` excludes the program name. Results go to the
/// output path or `out`; failures write an error object to `err`.
/// Exit codes: 0 success, 1 invalid input, 2 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Validates a problem document, fills defaults and executes it. Returns the
/// output document {command, spec, config, result}.
nlohmann::json execute(const nlohmann::json& spec);

/// Fills defaults and rejects unknown keys without running anything.
nlohmann::json normalize(const nlohmann::json& spec);

const std::vector<std::string>& subcommands();

}  // namespace utm::cli
