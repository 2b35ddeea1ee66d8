#include "sigtime/json_io.hpp"

#include <json.hpp>
#include <sstream>

namespace sigtime {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Parse, where + ": " + what);
}

json parse_document(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    fail(std::string(what), "malformed JSON at line " + std::to_string(line) +
                                ", column " + std::to_string(column));
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, "missing required key '" + std::string(key) + "'");
  return *it;
}

std::int64_t as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<std::int64_t>();
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

const json& as_array(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array");
  return v;
}

std::int64_t opt_int(const json& obj, const char* key, std::int64_t fallback,
                     const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return as_int(*it, where + "." + key);
}

bool opt_bool(const json& obj, const char* key, bool fallback, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  if (!it->is_boolean()) fail(where + "." + key, "expected a boolean");
  return it->get<bool>();
}

PortId parse_port_ref(const json& obj, const std::string& where) {
  PortId id;
  id.component = as_string(require(obj, "component", where), where + ".component");
  id.port = static_cast<int>(as_int(require(obj, "port", where), where + ".port"));
  return id;
}

json port_ref_json(const PortId& id) {
  return json{{"component", id.component}, {"port", id.port}};
}

PortKind parse_port_kind(const std::string& s, const std::string& where) {
  if (s == "input") return PortKind::Input;
  if (s == "output") return PortKind::Output;
  if (s == "sampling") return PortKind::Sampling;
  if (s == "actuation") return PortKind::Actuation;
  fail(where, "unknown port kind '" + s + "'");
}

RequirementKind parse_requirement_kind(const std::string& s, const std::string& where) {
  if (s == "data_age") return RequirementKind::DataAge;
  if (s == "synchronicity") return RequirementKind::Synchronicity;
  if (s == "sampling_rate") return RequirementKind::SamplingRate;
  if (s == "band_limit") return RequirementKind::BandLimit;
  if (s == "no_aliasing") return RequirementKind::NoAliasing;
  fail(where, "unknown requirement kind '" + s + "'");
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

SystemModel parse_model(const std::string& json_text) {
  json doc = parse_document(json_text, "model");
  std::vector<Component> components;
  const json& comps = as_array(require(doc, "components", "model"), "model.components");
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    std::string where = "components[" + std::to_string(ci) + "]";
    const json& jc = comps[ci];
    Component c;
    c.id = as_string(require(jc, "id", where), where + ".id");
    const json& ports = as_array(require(jc, "ports", where), where + ".ports");
    for (std::size_t pi = 0; pi < ports.size(); ++pi) {
      std::string pw = where + ".ports[" + std::to_string(pi) + "]";
      const json& jp = ports[pi];
      Port p;
      p.id.component = c.id;
      p.id.port = static_cast<int>(as_int(require(jp, "index", pw), pw + ".index"));
      p.kind = parse_port_kind(as_string(require(jp, "kind", pw), pw + ".kind"), pw + ".kind");
      p.resampling = opt_bool(jp, "resampling", p.kind == PortKind::Sampling, pw);
      if (jp.contains("band_limit_ns") && !jp["band_limit_ns"].is_null())
        p.band_limit_ns = as_int(jp["band_limit_ns"], pw + ".band_limit_ns");
      c.ports.push_back(std::move(p));
    }
    if (jc.contains("filters")) {
      const json& filters = as_array(jc["filters"], where + ".filters");
      for (std::size_t fi = 0; fi < filters.size(); ++fi) {
        std::string fw = where + ".filters[" + std::to_string(fi) + "]";
        int port = static_cast<int>(as_int(require(filters[fi], "port", fw), fw + ".port"));
        TimeNs cutoff = as_int(require(filters[fi], "cutoff_ns", fw), fw + ".cutoff_ns");
        if (!c.output_filters.emplace(port, cutoff).second)
          fail(fw, "duplicate filter for port " + std::to_string(port));
      }
    }
    if (jc.contains("tasks")) {
      const json& tasks = as_array(jc["tasks"], where + ".tasks");
      for (std::size_t ti = 0; ti < tasks.size(); ++ti)
        c.tasks.push_back(as_string(tasks[ti], where + ".tasks[" + std::to_string(ti) + "]"));
    }
    components.push_back(std::move(c));
  }

  std::vector<SignalPath> paths;
  const json& jpaths = as_array(require(doc, "paths", "model"), "model.paths");
  for (std::size_t i = 0; i < jpaths.size(); ++i) {
    std::string where = "paths[" + std::to_string(i) + "]";
    const json& jp = jpaths[i];
    SignalPath path;
    path.id = as_string(require(jp, "id", where), where + ".id");
    const json& interfaces = as_array(require(jp, "interfaces", where), where + ".interfaces");
    for (std::size_t ii = 0; ii < interfaces.size(); ++ii)
      path.interfaces.push_back(
          parse_port_ref(interfaces[ii], where + ".interfaces[" + std::to_string(ii) + "]"));
    const json& delays = as_array(require(jp, "delays_ns", where), where + ".delays_ns");
    for (std::size_t di = 0; di < delays.size(); ++di)
      path.delays_ns.push_back(
          as_int(delays[di], where + ".delays_ns[" + std::to_string(di) + "]"));
    paths.push_back(std::move(path));
  }
  return SystemModel::build(std::move(components), std::move(paths));
}

std::string serialize_model(const SystemModel& model) {
  json doc;
  doc["components"] = json::array();
  for (const Component& c : model.components()) {
    json jc;
    jc["id"] = c.id;
    jc["ports"] = json::array();
    for (const Port& p : c.ports) {
      json jp{{"index", p.id.port}, {"kind", to_string(p.kind)}, {"resampling", p.resampling}};
      if (p.band_limit_ns) jp["band_limit_ns"] = *p.band_limit_ns;
      jc["ports"].push_back(std::move(jp));
    }
    jc["filters"] = json::array();
    for (const auto& [port, cutoff] : c.output_filters)
      jc["filters"].push_back(json{{"port", port}, {"cutoff_ns", cutoff}});
    jc["tasks"] = c.tasks;
    doc["components"].push_back(std::move(jc));
  }
  doc["paths"] = json::array();
  for (const SignalPath& path : model.paths()) {
    json jp;
    jp["id"] = path.id;
    jp["interfaces"] = json::array();
    for (const PortId& port : path.interfaces) jp["interfaces"].push_back(port_ref_json(port));
    jp["delays_ns"] = path.delays_ns;
    doc["paths"].push_back(std::move(jp));
  }
  return dump(doc);
}

Trace parse_trace(const std::string& json_text) {
  json doc = parse_document(json_text, "trace");
  std::vector<Event> events;
  const json& jevents = as_array(require(doc, "events", "trace"), "trace.events");
  for (std::size_t i = 0; i < jevents.size(); ++i) {
    std::string where = "events[" + std::to_string(i) + "]";
    const json& je = jevents[i];
    Event e;
    e.signal.component = as_string(require(je, "component", where), where + ".component");
    e.signal.port = static_cast<int>(as_int(require(je, "port", where), where + ".port"));
    std::int64_t k = as_int(require(je, "k", where), where + ".k");
    if (k < 1) fail(where + ".k", "event indices start at 1");
    e.k = static_cast<std::uint64_t>(k);
    e.tag_ns = as_int(require(je, "tag_ns", where), where + ".tag_ns");
    if (je.contains("value") && !je["value"].is_null()) {
      if (!je["value"].is_number()) fail(where + ".value", "expected a number");
      e.value = je["value"].get<double>();
    }
    if (je.contains("link") && !je["link"].is_null()) {
      const json& jl = je["link"];
      std::string lw = where + ".link";
      ChainLink link;
      link.path = as_string(require(jl, "path", lw), lw + ".path");
      link.port.component = as_string(require(jl, "component", lw), lw + ".component");
      link.port.port = static_cast<int>(as_int(require(jl, "port", lw), lw + ".port"));
      std::int64_t lk = as_int(require(jl, "k", lw), lw + ".k");
      if (lk < 1) fail(lw + ".k", "event indices start at 1");
      link.k = static_cast<std::uint64_t>(lk);
      e.link = std::move(link);
    }
    events.push_back(std::move(e));
  }
  return Trace(std::move(events));
}

std::string serialize_trace(const Trace& trace) {
  json doc;
  doc["events"] = json::array();
  for (const Event& e : trace.all_events()) {
    json je{{"component", e.signal.component},
            {"port", e.signal.port},
            {"k", e.k},
            {"tag_ns", e.tag_ns}};
    if (e.value) je["value"] = *e.value;
    if (e.link)
      je["link"] = json{{"path", e.link->path},
                        {"component", e.link->port.component},
                        {"port", e.link->port.port},
                        {"k", e.link->k}};
    doc["events"].push_back(std::move(je));
  }
  return dump(doc);
}

std::vector<SignalRequirement> parse_requirements(const std::string& json_text) {
  json doc = parse_document(json_text, "requirements");
  const json& list = as_array(doc, "requirements");
  std::vector<SignalRequirement> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    std::string where = "requirements[" + std::to_string(i) + "]";
    const json& jr = list[i];
    SignalRequirement req;
    req.id = as_string(require(jr, "id", where), where + ".id");
    req.kind = parse_requirement_kind(as_string(require(jr, "kind", where), where + ".kind"),
                                      where + ".kind");
    if (req.kind == RequirementKind::Synchronicity) {
      const json& subjects = as_array(require(jr, "subjects", where), where + ".subjects");
      if (subjects.size() != 2) fail(where + ".subjects", "expected exactly two subjects");
      req.subject = parse_port_ref(subjects[0], where + ".subjects[0]");
      req.subject2 = parse_port_ref(subjects[1], where + ".subjects[1]");
    } else {
      req.subject = parse_port_ref(require(jr, "subject", where), where + ".subject");
    }
    if (req.kind != RequirementKind::NoAliasing) {
      Bounds b;
      b.lower = as_int(require(jr, "lower_ns", where), where + ".lower_ns");
      b.upper = opt_int(jr, "upper_ns", kUnboundedNs, where);
      if (!b.well_ordered()) fail(where, "lower_ns exceeds upper_ns");
      req.bounds = b;
    }
    out.push_back(std::move(req));
  }
  return out;
}

std::string serialize_requirements(const std::vector<SignalRequirement>& requirements) {
  json list = json::array();
  for (const SignalRequirement& req : requirements) {
    json jr{{"id", req.id}, {"kind", to_string(req.kind)}};
    if (req.kind == RequirementKind::Synchronicity && req.subject2)
      jr["subjects"] = json::array({port_ref_json(req.subject), port_ref_json(*req.subject2)});
    else
      jr["subject"] = port_ref_json(req.subject);
    if (req.bounds) {
      jr["lower_ns"] = req.bounds->lower;
      if (!is_unbounded(req.bounds->upper)) jr["upper_ns"] = req.bounds->upper;
    }
    list.push_back(std::move(jr));
  }
  return dump(list);
}

GenSpec parse_genspec(const std::string& json_text) {
  json doc = parse_document(json_text, "genspec");
  GenSpec spec;
  if (doc.contains("seed") && !doc["seed"].is_null())
    spec.seed = static_cast<std::uint64_t>(as_int(doc["seed"], "genspec.seed"));
  spec.duration_ns = as_int(require(doc, "duration_ns", "genspec"), "genspec.duration_ns");
  const json& paths = as_array(require(doc, "paths", "genspec"), "genspec.paths");
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::string where = "genspec.paths[" + std::to_string(i) + "]";
    const json& jp = paths[i];
    PathGenConfig cfg;
    cfg.path = as_string(require(jp, "path", where), where + ".path");
    cfg.period_ns = as_int(require(jp, "period_ns", where), where + ".period_ns");
    cfg.jitter_ns = opt_int(jp, "jitter_ns", 0, where);
    cfg.hop_latency.lower = opt_int(jp, "hop_min_ns", 0, where);
    cfg.hop_latency.upper = opt_int(jp, "hop_max_ns", 0, where);
    if (jp.contains("drop_prob") && !jp["drop_prob"].is_null()) {
      if (!jp["drop_prob"].is_number()) fail(where + ".drop_prob", "expected a number");
      cfg.drop_probability = jp["drop_prob"].get<double>();
    }
    if (jp.contains("align_terminal_with") && !jp["align_terminal_with"].is_null())
      cfg.align_terminal_with =
          as_string(jp["align_terminal_with"], where + ".align_terminal_with");
    spec.paths.push_back(std::move(cfg));
  }
  return spec;
}

std::string serialize_sidecar(const std::vector<GroundTruthChain>& chains,
                              std::uint64_t seed) {
  json doc;
  doc["seed"] = seed;
  doc["chains"] = json::array();
  for (const GroundTruthChain& c : chains)
    doc["chains"].push_back(json{{"path", c.path},
                                 {"k", c.k},
                                 {"h_ns", c.latency_ns},
                                 {"a_ns", c.age_ns},
                                 {"t_ns", c.logical_ns}});
  return dump(doc);
}

namespace {

json diagnostics_json(const std::vector<Diagnostic>& diagnostics) {
  json list = json::array();
  for (const Diagnostic& d : diagnostics)
    list.push_back(json{{"severity", to_string(d.severity)}, {"message", d.message}});
  return list;
}

json bounds_json(const Bounds& b) {
  json jb{{"lower_ns", b.lower}};
  if (!is_unbounded(b.upper)) jb["upper_ns"] = b.upper;
  return jb;
}

json verdict_json(const Verdict& v) {
  json jv{{"status", to_string(v.status)}, {"evaluated_count", v.evaluated_count}};
  jv["violations"] = json::array();
  for (const Violation& violation : v.violations) {
    json jviol{{"id", violation.id},
               {"instance", violation.instance},
               {"k", violation.k},
               {"measured_ns", violation.measured_ns},
               {"bound", bounds_json(violation.bound)}};
    jv["violations"].push_back(std::move(jviol));
  }
  if (!v.notes.empty()) jv["notes"] = v.notes;
  return jv;
}

}  // namespace

std::string serialize_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  return dump(json{{"diagnostics", diagnostics_json(diagnostics)}});
}

std::string serialize_transform_report(const TransformReport& report) {
  json doc;
  doc["constraints"] = json::array();
  for (const TimingConstraint& c : report.constraints) {
    json jc{{"id", c.id}, {"kind", to_string(c.kind)}};
    json target{{"paths", c.target.paths}};
    if (c.target.port) target["port"] = port_ref_json(*c.target.port);
    if (c.target.producer) target["producer"] = port_ref_json(*c.target.producer);
    jc["target"] = std::move(target);
    jc["lower_ns"] = c.bounds.lower;
    if (!is_unbounded(c.bounds.upper)) jc["upper_ns"] = c.bounds.upper;
    jc["provenance"] =
        json{{"requirement", c.provenance.requirement}, {"proposition", c.provenance.proposition}};
    doc["constraints"].push_back(std::move(jc));
  }
  doc["diagnostics"] = diagnostics_json(report.diagnostics);
  return dump(doc);
}

std::string serialize_measure_report(const MeasureReport& report) {
  json doc;
  doc["series"] = json::array();
  for (const MeasuredSeries& s : report.series) {
    json js{{"property", to_string(s.kind)}, {"signal", to_string(s.signal)}};
    if (!s.paths.empty()) js["paths"] = s.paths;
    json values = json::object();
    for (const auto& [k, v] : s.series.values) values[std::to_string(k)] = v;
    js["values"] = std::move(values);
    if (!s.series.values.empty()) js["bounds"] = bounds_json(summarize(s.series));
    doc["series"].push_back(std::move(js));
  }
  doc["notes"] = report.notes;
  return dump(doc);
}

std::string serialize_check_report(const CheckReport& report) {
  json doc;
  doc["verdicts"] = json::array();
  for (const CheckEntry& e : report.verdicts) {
    json je = verdict_json(e.verdict);
    je["id"] = e.id;
    je["source"] = e.source;
    doc["verdicts"].push_back(std::move(je));
  }
  doc["agreements"] = json::array();
  for (const Agreement& a : report.agreements)
    doc["agreements"].push_back(json{{"requirement", a.requirement_id},
                                     {"direct", to_string(a.direct.status)},
                                     {"transformed", to_string(a.transformed.status)},
                                     {"agree", a.agree}});
  doc["diagnostics"] = diagnostics_json(report.diagnostics);
  doc["overall"] = to_string(report.overall());
  return dump(doc);
}

namespace {

std::string bounds_text(const Bounds& b) {
  std::string upper = is_unbounded(b.upper) ? "unbounded" : std::to_string(b.upper);
  return "[" + std::to_string(b.lower) + ", " + upper + "] ns";
}

}  // namespace

std::string render_diagnostics_text(const std::vector<Diagnostic>& diagnostics) {
  std::ostringstream out;
  for (const Diagnostic& d : diagnostics)
    out << to_string(d.severity) << ": " << d.message << "\n";
  return out.str();
}

std::string render_transform_text(const TransformReport& report) {
  std::ostringstream out;
  for (const TimingConstraint& c : report.constraints) {
    out << c.id << "  " << to_string(c.kind) << "  ";
    for (std::size_t i = 0; i < c.target.paths.size(); ++i)
      out << (i ? "," : "path ") << c.target.paths[i];
    if (c.target.port) out << " at " << to_string(*c.target.port);
    if (c.target.producer) out << " fed by " << to_string(*c.target.producer);
    out << "  " << bounds_text(c.bounds) << "  (prop " << c.provenance.proposition
        << ", from " << c.provenance.requirement << ")\n";
  }
  out << render_diagnostics_text(report.diagnostics);
  return out.str();
}

std::string render_measure_text(const MeasureReport& report) {
  std::ostringstream out;
  out << "property        signal          paths           n       min..max (ns)\n";
  for (const MeasuredSeries& s : report.series) {
    std::string paths;
    for (std::size_t i = 0; i < s.paths.size(); ++i) paths += (i ? "," : "") + s.paths[i];
    std::string range = "-";
    if (!s.series.values.empty()) {
      Bounds b = summarize(s.series);
      range = std::to_string(b.lower) + ".." + std::to_string(b.upper);
    }
    out << to_string(s.kind);
    for (std::size_t i = std::string(to_string(s.kind)).size(); i < 16; ++i) out << ' ';
    out << to_string(s.signal);
    for (std::size_t i = to_string(s.signal).size(); i < 16; ++i) out << ' ';
    out << (paths.empty() ? "-" : paths);
    for (std::size_t i = (paths.empty() ? 1 : paths.size()); i < 16; ++i) out << ' ';
    out << s.series.values.size() << "\t" << range << "\n";
  }
  for (const std::string& note : report.notes) out << "note: " << note << "\n";
  return out.str();
}

std::string render_check_text(const CheckReport& report) {
  std::ostringstream out;
  for (const CheckEntry& e : report.verdicts) {
    out << to_string(e.verdict.status) << "  " << e.source << " " << e.id << "  (evaluated "
        << e.verdict.evaluated_count << ")\n";
    for (const Violation& v : e.verdict.violations)
      out << "  violation: " << v.instance << " k=" << v.k << " measured " << v.measured_ns
          << " ns outside " << bounds_text(v.bound) << "\n";
    for (const std::string& note : e.verdict.notes) out << "  note: " << note << "\n";
  }
  for (const Agreement& a : report.agreements)
    out << "agreement " << a.requirement_id << ": direct " << to_string(a.direct.status)
        << ", transformed " << to_string(a.transformed.status) << ", "
        << (a.agree ? "agree" : "DISAGREE") << "\n";
  out << render_diagnostics_text(report.diagnostics);
  out << "overall: " << to_string(report.overall()) << "\n";
  return out.str();
}

}  // namespace sigtime
