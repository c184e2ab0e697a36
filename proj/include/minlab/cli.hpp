#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "minlab/classify.hpp"

namespace minlab {

// Named descriptors with pinned verdicts used by `report` and the
// acceptance suite.
struct CorpusEntry {
  std::string name;
  std::string descriptor;
  bool dp_minimal;
  bool vc_minimal;
};
const std::vector<CorpusEntry>& golden_corpus();

// Exit codes: 0 success, 1 input error, 2 route disagreement or invariant
// violation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace minlab
