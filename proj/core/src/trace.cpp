#include "physarum/trace.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "physarum/errors.hpp"

namespace physarum {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string trace_csv_header() { return "iter,time,cost,residual_inf,alpha,energy,x_min,x_max,dist_inf,lyap_h"; }

namespace {

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::optional<double> parse_field(const std::string& s, bool required) {
  if (s.empty()) {
    if (required) throw Error(ErrorKind::InvalidArgument, "trace: missing required field");
    return std::nullopt;
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error(ErrorKind::InvalidArgument, "trace: bad number '" + s + "'");
  return v;
}

}  // namespace

std::string trace_csv_row(const TraceRecord& r) {
  std::string out = std::to_string(r.iter);
  for (const std::string& f :
       {format_number(r.time), format_number(r.cost), format_number(r.residual_inf), opt_number(r.alpha),
        format_number(r.energy), format_number(r.x_min), format_number(r.x_max), opt_number(r.dist_inf),
        opt_number(r.lyap_h)}) {
    out += ',';
    out += f;
  }
  return out;
}

std::string trace_to_csv(const std::vector<TraceRecord>& records) {
  std::string out = trace_csv_header() + "\n";
  for (const auto& r : records) out += trace_csv_row(r) + "\n";
  return out;
}

std::vector<TraceRecord> parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::InvalidArgument, "trace: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != trace_csv_header()) throw Error(ErrorKind::InvalidArgument, "trace: unexpected header");
  std::vector<TraceRecord> out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 10) throw Error(ErrorKind::InvalidArgument, "trace: expected 10 fields, got " + std::to_string(f.size()));
    TraceRecord r;
    r.iter = static_cast<std::uint64_t>(*parse_field(f[0], true));
    r.time = *parse_field(f[1], true);
    r.cost = *parse_field(f[2], true);
    r.residual_inf = *parse_field(f[3], true);
    r.alpha = parse_field(f[4], false);
    r.energy = *parse_field(f[5], true);
    r.x_min = *parse_field(f[6], true);
    r.x_max = *parse_field(f[7], true);
    r.dist_inf = parse_field(f[8], false);
    r.lyap_h = parse_field(f[9], false);
    out.push_back(r);
  }
  return out;
}

}  // namespace physarum
