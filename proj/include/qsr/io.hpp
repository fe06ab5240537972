#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "qsr/states.hpp"

namespace qsr {

// A parsed state file: exactly one of the two members is set.
struct LoadedState {
  std::optional<QuantumState> density;
  std::optional<PureVector> pure;

  const RegisterLayout& layout() const {
    return density ? density->layout() : pure->layout();
  }
  // Density operator view, valid for either variant.
  ComplexMatrix matrix() const { return density ? density->matrix() : pure->density(); }
};

// Round to 12 significant decimal digits (the serialization precision; keeps
// round-trip error below every test tolerance).
double round_sig12(double v);

// Parse and validate a state file. Schema problems raise InputError with a
// "schema:" prefix, invariant violations (non-PSD, trace != 1, norm != 1)
// raise InputError with an "invariant:" prefix, and entry-count/dimension
// mismatches raise DimensionError.
LoadedState load_state(const std::string& path);

nlohmann::json state_to_json(const QuantumState& s,
                             const nlohmann::json& metadata = nlohmann::json::object());
nlohmann::json state_to_json(const PureVector& v,
                             const nlohmann::json& metadata = nlohmann::json::object());

void save_state(const nlohmann::json& state, const std::string& path);

// Deterministic serialization: sorted keys, every double already rounded to
// 12 significant digits by the builders above.
void save_report(const nlohmann::json& report, const std::string& path);
std::string report_to_string(const nlohmann::json& report);

}  // namespace qsr
