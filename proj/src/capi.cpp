#include "sigtime/sigtime.h"

#include <cstring>
#include <memory>
#include <string>

#include "sigtime/checker.hpp"
#include "sigtime/json_io.hpp"
#include "sigtime/metrics.hpp"
#include "sigtime/model.hpp"
#include "sigtime/requirements.hpp"
#include "sigtime/trace.hpp"
#include "sigtime/tracegen.hpp"

using namespace sigtime;

struct sigtime_model {
  SystemModel model;
};

struct sigtime_trace {
  Trace trace;
};

struct sigtime_requirements {
  std::vector<SignalRequirement> requirements;
};

struct sigtime_result {
  std::string json;
  std::string aux_json;
  std::string text;
  int outcome = 0;
};

namespace {

thread_local std::string g_last_error;

int code_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Parse: return SIGTIME_E_PARSE;
    case ErrorCode::Validation: return SIGTIME_E_VALIDATION;
    case ErrorCode::UnknownReference: return SIGTIME_E_REFERENCE;
    case ErrorCode::Pairing: return SIGTIME_E_DATA;
    case ErrorCode::MissingData: return SIGTIME_E_DATA;
    case ErrorCode::Malformed: return SIGTIME_E_VALIDATION;
    case ErrorCode::InvalidArgument: return SIGTIME_E_ARGUMENT;
  }
  return SIGTIME_E_INTERNAL;
}

int fail_arg(const char* message) {
  g_last_error = message;
  return SIGTIME_E_ARGUMENT;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const Error& e) {
    g_last_error = e.what();
    return code_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SIGTIME_E_INTERNAL;
  }
}

sigtime_result* make_result(std::string json, std::string text, int outcome,
                            std::string aux = {}) {
  auto* r = new sigtime_result;
  r->json = std::move(json);
  r->text = std::move(text);
  r->outcome = outcome;
  r->aux_json = std::move(aux);
  return r;
}

int diagnostics_result(const std::vector<Diagnostic>& diags, sigtime_result** out) {
  *out = make_result(serialize_diagnostics(diags), render_diagnostics_text(diags),
                     has_errors(diags) ? 1 : 0);
  return SIGTIME_OK;
}

}  // namespace

extern "C" {

const char* sigtime_version(void) { return "0.1.0"; }

const char* sigtime_last_error(void) { return g_last_error.c_str(); }

int sigtime_model_parse(const char* json_text, sigtime_model** out) {
  if (!json_text || !out) return fail_arg("null argument");
  return guarded([&] {
    auto handle = std::make_unique<sigtime_model>();
    handle->model = parse_model(json_text);
    *out = handle.release();
    return SIGTIME_OK;
  });
}

void sigtime_model_free(sigtime_model* model) { delete model; }

int sigtime_model_validate(const sigtime_model* model, sigtime_result** out) {
  if (!model || !out) return fail_arg("null argument");
  return guarded([&] { return diagnostics_result(validate_model(model->model), out); });
}

int sigtime_trace_parse(const char* json_text, sigtime_trace** out) {
  if (!json_text || !out) return fail_arg("null argument");
  return guarded([&] {
    auto handle = std::make_unique<sigtime_trace>();
    handle->trace = parse_trace(json_text);
    *out = handle.release();
    return SIGTIME_OK;
  });
}

void sigtime_trace_free(sigtime_trace* trace) { delete trace; }

int sigtime_trace_validate(const sigtime_trace* trace, sigtime_result** out) {
  if (!trace || !out) return fail_arg("null argument");
  return guarded([&] { return diagnostics_result(validate_trace(trace->trace), out); });
}

int sigtime_requirements_parse(const char* json_text, sigtime_requirements** out) {
  if (!json_text || !out) return fail_arg("null argument");
  return guarded([&] {
    auto handle = std::make_unique<sigtime_requirements>();
    handle->requirements = parse_requirements(json_text);
    *out = handle.release();
    return SIGTIME_OK;
  });
}

void sigtime_requirements_free(sigtime_requirements* requirements) { delete requirements; }

int sigtime_measure(const sigtime_model* model, const sigtime_trace* trace,
                    const char* subject_component, int subject_port,
                    const char* pair_component, int pair_port, int64_t epsilon_ns,
                    sigtime_result** out) {
  if (!model || !trace || !subject_component || !out) return fail_arg("null argument");
  return guarded([&] {
    PortId subject{subject_component, subject_port};
    std::optional<PortId> pair;
    if (pair_component) pair = PortId{pair_component, pair_port};
    MeasureReport report =
        measure_subject(trace->trace, model->model, subject, pair, epsilon_ns);
    *out = make_result(serialize_measure_report(report), render_measure_text(report), 0);
    return SIGTIME_OK;
  });
}

int sigtime_transform(const sigtime_model* model,
                      const sigtime_requirements* requirements, sigtime_result** out) {
  if (!model || !requirements || !out) return fail_arg("null argument");
  return guarded([&] {
    TransformReport report = transform_all(requirements->requirements, model->model);
    *out = make_result(serialize_transform_report(report), render_transform_text(report),
                       has_errors(report.diagnostics) ? 1 : 0);
    return SIGTIME_OK;
  });
}

int sigtime_check(const sigtime_model* model, const sigtime_trace* trace,
                  const sigtime_requirements* requirements, int64_t epsilon_ns,
                  sigtime_result** out) {
  if (!model || !trace || !requirements || !out) return fail_arg("null argument");
  return guarded([&] {
    CheckReport report =
        run_check(trace->trace, requirements->requirements, model->model, epsilon_ns);
    int outcome = SIGTIME_CHECK_INCONCLUSIVE;
    if (report.overall() == Status::Pass) outcome = SIGTIME_CHECK_PASS;
    if (report.overall() == Status::Fail) outcome = SIGTIME_CHECK_FAIL;
    if (has_errors(report.diagnostics)) outcome = SIGTIME_CHECK_FAIL;
    *out = make_result(serialize_check_report(report), render_check_text(report), outcome);
    return SIGTIME_OK;
  });
}

int sigtime_generate(const sigtime_model* model, const char* genspec_json,
                     const uint64_t* seed_override, sigtime_result** out) {
  if (!model || !genspec_json || !out) return fail_arg("null argument");
  return guarded([&] {
    GenSpec spec = parse_genspec(genspec_json);
    if (seed_override) spec.seed = *seed_override;
    GeneratedTrace generated = generate_trace(model->model, spec);
    std::string text = "generated " + std::to_string(generated.trace.event_count()) +
                       " events, " + std::to_string(generated.ground_truth.size()) +
                       " complete chains, " + std::to_string(generated.dropped) +
                       " dropped, seed " + std::to_string(*spec.seed) + "\n";
    *out = make_result(serialize_trace(generated.trace), std::move(text), 0,
                       serialize_sidecar(generated.ground_truth, *spec.seed));
    return SIGTIME_OK;
  });
}

const char* sigtime_result_json(const sigtime_result* result) {
  return result ? result->json.c_str() : nullptr;
}

const char* sigtime_result_aux_json(const sigtime_result* result) {
  if (!result || result->aux_json.empty()) return nullptr;
  return result->aux_json.c_str();
}

const char* sigtime_result_text(const sigtime_result* result) {
  return result ? result->text.c_str() : nullptr;
}

int sigtime_result_outcome(const sigtime_result* result) {
  return result ? result->outcome : -1;
}

void sigtime_result_free(sigtime_result* result) { delete result; }

}  // extern "C"
