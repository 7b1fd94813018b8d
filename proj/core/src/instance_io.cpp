#include "physarum/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "physarum/errors.hpp"

namespace physarum {

using json = nlohmann::ordered_json;

namespace {

Rational integer_entry(const json& v, const char* field) {
  if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
  if (v.is_number_unsigned()) return Rational(std::to_string(v.get<unsigned long long>()));
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15) return Rational(static_cast<long>(d));
    throw Error(ErrorKind::NonIntegerData, std::string(field) + " has non-integer entry " + v.dump());
  }
  if (v.is_string()) {
    Rational r = parse_rational(v.get<std::string>());
    if (!is_integer(r)) throw Error(ErrorKind::NonIntegerData, std::string(field) + " has non-integer entry " + v.dump());
    return r;
  }
  throw Error(ErrorKind::NonIntegerData, std::string(field) + " has non-numeric entry " + v.dump());
}

Rational any_entry(const json& v, const char* field) {
  if (v.is_number_integer() || v.is_number_unsigned()) return integer_entry(v, field);
  if (v.is_number_float()) return rational_from_double(v.get<double>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw Error(ErrorKind::InvalidArgument, std::string(field) + " has non-numeric entry " + v.dump());
}

VecQ vector_field(const json& j, const char* field, bool integral) {
  if (!j.contains(field) || !j[field].is_array())
    throw Error(ErrorKind::InvalidArgument, std::string("missing array field '") + field + "'");
  VecQ out;
  for (const auto& v : j[field]) out.push_back(integral ? integer_entry(v, field) : any_entry(v, field));
  return out;
}

json rational_json(const Rational& r) {
  if (is_integer(r) && abs(r) < Rational(1L << 53)) return json(r.get_num().get_si());
  const double d = to_double(r);
  if (rational_from_double(d) == r) return json(d);
  return json(to_fraction(r));
}

}  // namespace

LpInstance parse_instance_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("instance JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "instance JSON must be an object");
  if (!j.contains("A") || !j["A"].is_array()) throw Error(ErrorKind::InvalidArgument, "missing array field 'A'");

  const auto& rows = j["A"];
  const std::size_t n = rows.size();
  const std::size_t m = n ? rows[0].size() : 0;
  LpInstance inst;
  inst.A = MatrixQ(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != m) throw Error(ErrorKind::InvalidArgument, "A is not rectangular");
    for (std::size_t k = 0; k < m; ++k) inst.A(i, k) = integer_entry(rows[i][k], "A");
  }
  if (j.contains("n") && j["n"].get<std::size_t>() != n) throw Error(ErrorKind::InvalidArgument, "field n disagrees with A");
  if (j.contains("m") && j["m"].get<std::size_t>() != m) throw Error(ErrorKind::InvalidArgument, "field m disagrees with A");
  inst.b = vector_field(j, "b", true);
  inst.c = vector_field(j, "c", true);
  if (j.contains("x0") && !j["x0"].is_null()) inst.x0 = vector_field(j, "x0", false);
  if (j.contains("mode")) inst.mode = parse_mode(j["mode"].get<std::string>());
  return inst;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << content;
}

LpInstance load_instance(const std::string& path) { return parse_instance_json(read_file(path)); }

std::string instance_to_json(const LpInstance& inst, int indent) {
  json j;
  j["n"] = inst.n();
  j["m"] = inst.m();
  json A = json::array();
  for (std::size_t i = 0; i < inst.n(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < inst.m(); ++k) row.push_back(rational_json(inst.A(i, k)));
    A.push_back(row);
  }
  j["A"] = A;
  j["b"] = json::array();
  for (const auto& v : inst.b) j["b"].push_back(rational_json(v));
  j["c"] = json::array();
  for (const auto& v : inst.c) j["c"].push_back(rational_json(v));
  if (inst.x0) {
    j["x0"] = json::array();
    for (const auto& v : *inst.x0) j["x0"].push_back(rational_json(v));
  }
  j["mode"] = to_string(inst.mode);
  return j.dump(indent) + "\n";
}

void save_instance(const LpInstance& inst, const std::string& path) { write_file(path, instance_to_json(inst)); }

}  // namespace physarum
