#pragma once

#include <string>
#include <vector>

#include "amc/amas.hpp"

// Example systems shipped with the tool.  The first three are fixed source
// texts; the chains family is generated (k agents, each a private chain of
// `len` invisible steps ending in a self-loop) and scales the benchmark.

namespace amc {

[[nodiscard]] const std::vector<std::string>& bundled_names();
[[nodiscard]] std::string bundled_source(const std::string& name);  // throws on unknown
[[nodiscard]] Amas bundled_amas(const std::string& name);

[[nodiscard]] Amas make_chains(int agents, int length);

}  // namespace amc
