#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nocl {

// Process exit codes shared by every subcommand.
namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kValidation = 1;   // bad config / bad arguments
inline constexpr int kRuntime = 2;      // I/O or solver failure
inline constexpr int kProperty = 3;     // a verification property failed
}  // namespace exit_code

struct CommonOverrides {
  std::size_t jobs = 0;  // 0 -> all hardware threads
  std::optional<std::uint64_t> seed0;
  std::optional<std::string> output;
};

int cmd_simulate(const std::string& config_path, const CommonOverrides& overrides,
                 std::ostream& log);

int cmd_verify(const std::string& suite, std::uint64_t seed, std::ostream& log);

int cmd_sweep(const std::string& config_path, const std::string& axis,
              const std::vector<double>& values, const CommonOverrides& overrides,
              std::ostream& log);

// Minimum pairwise separation of the configured kernel; divergence is one of
// "l2", "hellinger", "tv".
int cmd_gap(const std::string& config_path, const std::string& divergence,
            std::ostream& log);

// Repeated sequential tests between the first two hypotheses under the
// worst-case law of the (alternating) truth; reports the empirical
// wrong-decision rate against the configured confidence level.
int cmd_test_pair(const std::string& config_path, const CommonOverrides& overrides,
                  std::ostream& log);

}  // namespace nocl
