#include "qsr/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace qsr {

namespace {

using nlohmann::json;

double as_number(const json& j, const char* where) {
  if (!j.is_number()) throw InputError(std::string("schema: ") + where + " must be a number");
  return j.get<double>();
}

std::vector<cplx> parse_pairs(const json& j, const char* field) {
  if (!j.is_array())
    throw InputError(std::string("schema: ") + field + " must be an array of [re, im] pairs");
  std::vector<cplx> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2)
      throw InputError(std::string("schema: ") + field + " entries must be [re, im] pairs");
    out.emplace_back(as_number(e[0], field), as_number(e[1], field));
  }
  return out;
}

json pairs_json(const cplx* a, size_t count) {
  json out = json::array();
  for (size_t i = 0; i < count; ++i)
    out.push_back(json::array({round_sig12(a[i].real()), round_sig12(a[i].imag())}));
  return out;
}

json registers_json(const RegisterLayout& layout) {
  json regs = json::array();
  for (const auto& r : layout.registers()) regs.push_back({{"label", r.label}, {"dim", r.dim}});
  return regs;
}

RegisterLayout parse_layout(const json& j) {
  if (!j.contains("registers") || !j["registers"].is_array() || j["registers"].empty())
    throw InputError("schema: missing or empty registers array");
  std::vector<Register> regs;
  for (const auto& r : j["registers"]) {
    if (!r.is_object() || !r.contains("label") || !r.contains("dim") || !r["label"].is_string() ||
        !r["dim"].is_number_integer())
      throw InputError("schema: each register needs a string label and an integer dim");
    regs.push_back({r["label"].get<std::string>(), r["dim"].get<long>()});
  }
  try {
    return RegisterLayout(std::move(regs));
  } catch (const Error& e) {
    throw InputError(std::string("schema: ") + e.what());
  }
}

}  // namespace

double round_sig12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

LoadedState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("schema: cannot open state file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(std::string("schema: ") + e.what());
  }
  if (!j.is_object()) throw InputError("schema: state file must be a JSON object");
  if (!j.contains("format_version") || !j["format_version"].is_number_integer() ||
      j["format_version"].get<int>() != 1)
    throw InputError("schema: format_version must be the integer 1");

  const RegisterLayout layout = parse_layout(j);
  const bool has_matrix = j.contains("matrix"), has_vector = j.contains("vector");
  if (has_matrix == has_vector)
    throw InputError("schema: exactly one of matrix/vector must be present");

  LoadedState out;
  const long total = layout.total_dim();
  if (has_matrix) {
    std::vector<cplx> entries = parse_pairs(j["matrix"], "matrix");
    if (static_cast<long>(entries.size()) != total * total)
      throw DimensionError("matrix entry count does not match the register dimensions");
    try {
      out.density = QuantumState(layout, ComplexMatrix(static_cast<int>(total), std::move(entries)));
    } catch (const ContractError& e) {
      throw InputError(std::string("invariant: ") + e.what());
    }
  } else {
    std::vector<cplx> amp = parse_pairs(j["vector"], "vector");
    if (static_cast<long>(amp.size()) != total)
      throw DimensionError("vector length does not match the register dimensions");
    double norm2 = 0.0;
    for (const auto& a : amp) norm2 += std::norm(a);
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-10)
      throw InputError("invariant: vector norm differs from 1 by more than 1e-10");
    out.pure = PureVector(layout, std::move(amp));
  }
  return out;
}

nlohmann::json state_to_json(const QuantumState& s, const nlohmann::json& metadata) {
  json j;
  j["format_version"] = 1;
  j["registers"] = registers_json(s.layout());
  j["matrix"] = pairs_json(s.matrix().data(), s.matrix().entries().size());
  j["metadata"] = metadata;
  return j;
}

nlohmann::json state_to_json(const PureVector& v, const nlohmann::json& metadata) {
  json j;
  j["format_version"] = 1;
  j["registers"] = registers_json(v.layout());
  j["vector"] = pairs_json(v.amplitudes().data(), v.amplitudes().size());
  j["metadata"] = metadata;
  return j;
}

void save_state(const nlohmann::json& state, const std::string& path) {
  save_report(state, path);
}

std::string report_to_string(const nlohmann::json& report) { return report.dump(2) + "\n"; }

void save_report(const nlohmann::json& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file: " + path);
  out << report_to_string(report);
}

}  // namespace qsr
