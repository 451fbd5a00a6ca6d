#include "nocl/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace nocl {
namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no CRLF translation
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::string& path) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw std::runtime_error(path + ": bad number '" + s + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& s, const std::string& path) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw std::runtime_error(path + ": bad integer '" + s + "'");
  return v;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_summary_csv(const std::string& path, std::span<const SummaryRow> rows) {
  std::ofstream out = open_out(path);
  out << "run_id,seed,predictor,kernel,T,cum_errors,guarantee_event\n";
  for (const SummaryRow& r : rows) {
    out << r.run_id << ',' << r.seed << ',' << r.predictor << ',' << r.kernel << ','
        << r.horizon << ',' << r.cum_errors << ',' << (r.guarantee_event ? 1 : 0) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<SummaryRow> read_summary_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || lines[0] != "run_id,seed,predictor,kernel,T,cum_errors,guarantee_event")
    throw std::runtime_error(path + ": missing summary header");
  std::vector<SummaryRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = split_line(lines[i]);
    if (f.size() != 7) throw std::runtime_error(path + ": expected 7 fields");
    SummaryRow r;
    r.run_id = parse_uint(f[0], path);
    r.seed = parse_uint(f[1], path);
    r.predictor = f[2];
    r.kernel = f[3];
    r.horizon = parse_uint(f[4], path);
    r.cum_errors = parse_uint(f[5], path);
    r.guarantee_event = parse_uint(f[6], path) != 0;
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_curve_csv(const std::string& path, const std::string& x_name,
                     std::span<const CurveRow> rows) {
  std::ofstream out = open_out(path);
  out << x_name << ",median,q90,mean\n";
  for (const CurveRow& r : rows) {
    out << format_double(r.x) << ',' << format_double(r.median) << ','
        << format_double(r.q90) << ',' << format_double(r.mean) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<CurveRow> read_curve_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": empty curve file");
  std::vector<CurveRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = split_line(lines[i]);
    if (f.size() != 4) throw std::runtime_error(path + ": expected 4 fields");
    rows.push_back({parse_double(f[0], path), parse_double(f[1], path),
                    parse_double(f[2], path), parse_double(f[3], path)});
  }
  return rows;
}

}  // namespace nocl
