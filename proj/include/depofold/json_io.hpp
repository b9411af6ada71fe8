// Copyright 2026 The depofold Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEPOFOLD_JSON_IO_HPP_
#define DEPOFOLD_JSON_IO_HPP_

#include <string>
#include <string_view>

#include <json.hpp>

#include "depofold/circuit.hpp"
#include "depofold/harness.hpp"
#include "depofold/mitigation.hpp"
#include "depofold/noise.hpp"

namespace depofold {

using Json = nlohmann::ordered_json;

/// {"n_qubits", "measured", "gates": [{"kind", "qubits", "angle"?, "injected"?}], "basis_change"?}
/// with angles printed at 17 significant digits.
std::string circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const Json& j);
Circuit circuit_from_json(std::string_view text);
inline Circuit circuit_from_json(const std::string& text) { return circuit_from_json(std::string_view(text)); }

/// Flat object; infinite T1/T2 are written as null. Missing keys keep the value in `base`.
Json noise_to_json(const NoiseModel& m);
NoiseModel noise_from_json(const Json& j, const NoiseModel& base = NoiseModel::noiseless());

Json to_json(const MitigatedValue& v);
Json to_json(const DepolarizationEstimate& e);
Json to_json(const TargetCase& tc);
TargetCase target_case_from_json(const Json& j);
Json to_json(const ExperimentConfig& cfg);
/// Keys absent from `j` keep their value in `base`; unknown keys are rejected.
ExperimentConfig config_from_json(const Json& j, ExperimentConfig base = {});

/// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace depofold

#endif  // DEPOFOLD_JSON_IO_HPP_
