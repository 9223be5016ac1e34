#pragma once

#include <string>
#include <vector>

#include "qsym/poisson.hpp"

namespace qsym {

struct CheckResult {
  enum class Status { Pass, Fail, Error };
  std::string suite;
  std::string name;
  Status status = Status::Pass;
  std::string detail;
};

const char* to_string(CheckResult::Status s);

/// A printed formula that disagrees with the derived one, with both values.
struct ErrataEntry {
  std::string suite;
  std::string context;
  Erratum entry;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  std::vector<ErrataEntry> errata;

  bool passed() const;
  /// Some check stopped on a domain error.
  bool errored() const;
  int failures() const;
};

/// algebra, trace, myb, kernels, dirac, trihamiltonian, jacobi, logderivation.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// Runs one suite, or every suite for "all" (in parallel). Each check is
/// seeded from its own name, and the report is sorted by suite then check
/// name, so the result does not depend on scheduling.
VerifyReport run_suite(const std::string& name);

}  // namespace qsym
