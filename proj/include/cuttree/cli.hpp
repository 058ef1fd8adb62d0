#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cuttree/offspring.hpp"

namespace cuttree {

// Exit codes of cuttree-lab.
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// {"model": "geometric"}, {"model": "power_tail", "alpha": a} or
// {"model": "explicit", "pmf": [...]}. ConfigError on anything else.
OffspringModel model_from_json(const nlohmann::json& spec);

// Runs `cuttree-lab args...` (args excludes the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cuttree
