#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace physarum {

struct TraceRecord {
  std::uint64_t iter = 0;
  double time = 0;
  double cost = 0;
  double residual_inf = 0;
  std::optional<double> alpha;
  double energy = 0;
  double x_min = 0;
  double x_max = 0;
  std::optional<double> dist_inf;
  std::optional<double> lyap_h;
};

std::string trace_csv_header();
std::string trace_csv_row(const TraceRecord& r);
std::string trace_to_csv(const std::vector<TraceRecord>& records);
std::vector<TraceRecord> parse_trace_csv(const std::string& text);

// printf("%.12g")
std::string format_number(double v);

}  // namespace physarum
