#pragma once

#include <optional>
#include <string>
#include <vector>

namespace otstruct {

struct ExampleCheck {
  std::string name;
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct PaperExampleOptions {
  /// Directory holding epsilon.json, epsilon_quarter.json, hypercube.json,
  /// hypercube_plan.json, remark.json and singleton.json.
  std::string instance_dir;
  /// Name of a check whose expected value is deliberately corrupted, to
  /// exercise the mismatch path.
  std::optional<std::string> perturb;
};

/// Runs every published example end to end and compares exact string forms.
/// File problems surface as ParseError or ValidationError.
std::vector<ExampleCheck> run_paper_examples(const PaperExampleOptions& options);

}  // namespace otstruct
