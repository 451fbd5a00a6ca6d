#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nocl {

// One Monte Carlo run in the summary file.
struct SummaryRow {
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  std::string predictor;
  std::string kernel;
  std::size_t horizon = 0;
  std::size_t cum_errors = 0;
  bool guarantee_event = true;
};

// One point of a sweep curve; x is the swept quantity.
struct CurveRow {
  double x = 0.0;
  double median = 0.0;
  double q90 = 0.0;
  double mean = 0.0;
};

// Files use LF line endings and '.' decimal separators regardless of locale.
void write_summary_csv(const std::string& path, std::span<const SummaryRow> rows);
std::vector<SummaryRow> read_summary_csv(const std::string& path);

void write_curve_csv(const std::string& path, const std::string& x_name,
                     std::span<const CurveRow> rows);
std::vector<CurveRow> read_curve_csv(const std::string& path);

std::string format_double(double v);  // shortest round-trip text

}  // namespace nocl
