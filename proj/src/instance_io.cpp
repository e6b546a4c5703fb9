#include "mcl/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mcl {

using nlohmann::json;

namespace {

std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double number_at(const json& v, const std::string& what) {
  if (!v.is_number()) throw ParseError(what + " is not a number");
  return v.get<double>();
}

}  // namespace

InstanceFile parse_instance(const std::string& text, bool raw) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("instance file: " + location(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance file: top level must be an object");
  for (const char* key : {"n", "C", "u_star"})
    if (!doc.contains(key)) throw ParseError(std::string("instance file: missing field '") + key + "'");
  if (!doc["n"].is_number_integer() || doc["n"].get<long>() < 1)
    throw ParseError("instance file: 'n' must be a positive integer");
  const int n = doc["n"].get<int>();

  const json& rows = doc["C"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw ParseError("instance file: 'C' must have n rows");
  Matrix C(n, n);
  for (int i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n)
      throw ParseError("instance file: row " + std::to_string(i) + " of 'C' must have n entries");
    for (int j = 0; j < n; ++j)
      C(i, j) = number_at(rows[i][j], "C[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  }
  const json& us = doc["u_star"];
  if (!us.is_array() || static_cast<int>(us.size()) != n)
    throw ParseError("instance file: 'u_star' must have n entries");
  Vector u(n);
  for (int i = 0; i < n; ++i) u[i] = number_at(us[i], "u_star[" + std::to_string(i) + "]");

  InstanceFile out;
  if (doc.contains("meta")) {
    if (!doc["meta"].is_object()) throw ParseError("instance file: 'meta' must be an object");
    for (auto& [k, v] : doc["meta"].items())
      out.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
  }
  if ((C.array() < 0.0).any()) throw ParseError("instance file: 'C' has a negative entry");
  if (raw) {
    out.instance = Instance{C, u, false};
    bool ok = C == C.transpose() && std::abs(l1(C) - 1.0) <= kNormalizationTol &&
              (u.isZero(0.0) || std::abs(l1(u) - 1.0) <= kNormalizationTol);
    out.instance.normalized = ok;
  } else {
    try {
      out.instance = normalize(Instance{C, u, false});
    } catch (const HypothesisError& e) {
      throw ParseError(std::string("instance file: ") + e.what());
    }
  }
  return out;
}

InstanceFile read_instance(const std::string& path, bool raw) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str(), raw);
}

std::string format_instance(const Instance& inst, const std::map<std::string, std::string>& meta) {
  json doc;
  const int n = inst.n();
  doc["n"] = n;
  json rows = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) row.push_back(inst.C(i, j));
    rows.push_back(row);
  }
  doc["C"] = rows;
  json us = json::array();
  for (int i = 0; i < n; ++i) us.push_back(inst.u_star[i]);
  doc["u_star"] = us;
  if (!meta.empty()) doc["meta"] = meta;
  return doc.dump(2) + "\n";
}

void write_instance(const std::string& path, const Instance& inst,
                    const std::map<std::string, std::string>& meta) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << format_instance(inst, meta);
}

}  // namespace mcl
