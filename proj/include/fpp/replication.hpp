#pragma once

#include <string>
#include <vector>

#include "fpp/vectorspace.hpp"

namespace fpp::repl {

struct UnknownCase : Error {
  using Error::Error;
};

// One pinned numerical check.  Scalar cases use a single entry; passed
// means the componentwise deviation never exceeds the tolerance.
struct ReplicationCase {
  std::string name;
  std::vector<double> expected;
  std::vector<double> computed;
  double tolerance = 0.0;
  bool passed = false;
  std::string reference;  // the fact that pins the expected value
};

ReplicationCase run_case(const std::string& name);

std::vector<std::string> case_names();  // ascending by name

// Every case, ordered by name.  Deterministic across runs.
std::vector<ReplicationCase> run_all();

}  // namespace fpp::repl
