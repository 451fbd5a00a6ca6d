#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nocl {

// Outcome of one randomized or exhaustive property audit.
struct PropertyResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;  // worst slack / violation observed (sign per check)
  std::string note;
};

// Suites: "divergences", "geometry", "ewa", "testers", or "all".  Each runs a
// fixed set of deterministic audits (seeded from `seed`) and finishes in well
// under a second.  Unknown suite names throw std::invalid_argument.
std::vector<PropertyResult> verify_suite(const std::string& suite, std::uint64_t seed);

}  // namespace nocl
