// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include <json.hpp>

#include "qsf/codegen.hpp"

namespace qsf {

inline constexpr std::string_view kBundleFormat = "qsf-bundle/1";

nlohmann::json circuit_to_json(const CircuitIR &circuit);
/// Throws qsf::Error E_BAD_BUNDLE on malformed input or invalid circuits.
CircuitIR circuit_from_json(const nlohmann::json &j);

enum class EmitFilter { Bundle, Qasm, Qiskit };

/// Artifact names kept by a filter, in name order.
std::vector<std::string> filtered_artifacts(const ServiceBundle &bundle, EmitFilter filter);

/// Contents of manifest.json.
nlohmann::json manifest_to_json(const ServiceBundle &bundle, EmitFilter filter = EmitFilter::Bundle);

/// Single-document form: {"manifest": ..., "artifacts": {name: text}}.
nlohmann::json bundle_to_json(const ServiceBundle &bundle);
ServiceBundle bundle_from_json(const nlohmann::json &j);

/// Writes manifest.json + artifacts/ atomically: on failure `dir` is left as
/// it was. An existing `dir` is replaced. Throws qsf::Error E_IO.
void write_bundle_dir(const ServiceBundle &bundle, const std::filesystem::path &dir,
                      EmitFilter filter = EmitFilter::Bundle);

/// Throws E_IO / E_BAD_BUNDLE.
ServiceBundle read_bundle_dir(const std::filesystem::path &dir);

} // namespace qsf
