#pragma once

#include <string>
#include <vector>

#include "sigtime/checker.hpp"
#include "sigtime/metrics.hpp"
#include "sigtime/model.hpp"
#include "sigtime/requirements.hpp"
#include "sigtime/trace.hpp"
#include "sigtime/tracegen.hpp"
#include "sigtime/types.hpp"

namespace sigtime {

// Parsers throw Error{Parse} with line/field context, then
// Error{Validation|UnknownReference} for structural defects the schema
// cannot express.

SystemModel parse_model(const std::string& json_text);
Trace parse_trace(const std::string& json_text);
std::vector<SignalRequirement> parse_requirements(const std::string& json_text);
GenSpec parse_genspec(const std::string& json_text);

// Canonical serializations (sorted keys, two-space indent, trailing
// newline) so repeated runs are byte-identical.

std::string serialize_model(const SystemModel& model);
std::string serialize_trace(const Trace& trace);
std::string serialize_requirements(const std::vector<SignalRequirement>& requirements);
std::string serialize_sidecar(const std::vector<GroundTruthChain>& chains,
                              std::uint64_t seed);
std::string serialize_diagnostics(const std::vector<Diagnostic>& diagnostics);
std::string serialize_transform_report(const TransformReport& report);
std::string serialize_measure_report(const MeasureReport& report);
std::string serialize_check_report(const CheckReport& report);

// Human-readable renderings, one line per finding.

std::string render_diagnostics_text(const std::vector<Diagnostic>& diagnostics);
std::string render_transform_text(const TransformReport& report);
std::string render_measure_text(const MeasureReport& report);
std::string render_check_text(const CheckReport& report);

}  // namespace sigtime
