#include "sigtime/model.hpp"

#include <algorithm>
#include <set>

namespace sigtime {

const char* to_string(PortKind k) {
  switch (k) {
    case PortKind::Input: return "input";
    case PortKind::Output: return "output";
    case PortKind::Sampling: return "sampling";
    case PortKind::Actuation: return "actuation";
  }
  return "?";
}

const char* to_string(Severity s) {
  switch (s) {
    case Severity::Info: return "info";
    case Severity::Warning: return "warning";
    case Severity::Error: return "error";
  }
  return "?";
}

TimeNs SignalPath::total_delay_ns() const {
  TimeNs sum = 0;
  for (TimeNs d : delays_ns) sum += d;
  return sum;
}

TimeNs SignalPath::prefix_delay_ns(std::size_t position) const {
  TimeNs sum = 0;
  for (std::size_t i = 0; i <= position && i < delays_ns.size(); ++i)
    sum += delays_ns[i];
  return sum;
}

SystemModel SystemModel::build(std::vector<Component> components,
                               std::vector<SignalPath> paths) {
  SystemModel m;
  m.components_ = std::move(components);
  m.paths_ = std::move(paths);

  for (std::size_t ci = 0; ci < m.components_.size(); ++ci) {
    const Component& c = m.components_[ci];
    if (!m.component_index_.emplace(c.id, ci).second)
      throw Error(ErrorCode::Validation, "duplicate component id '" + c.id + "'");
    for (std::size_t pi = 0; pi < c.ports.size(); ++pi) {
      const Port& p = c.ports[pi];
      if (p.id.component != c.id)
        throw Error(ErrorCode::Validation,
                    "port " + to_string(p.id) + " declared inside component '" + c.id + "'");
      if (!m.port_index_.emplace(p.id, std::make_pair(ci, pi)).second)
        throw Error(ErrorCode::Validation, "duplicate port " + to_string(p.id));
    }
  }

  for (const Component& c : m.components_) {
    for (const auto& [port, cutoff] : c.output_filters) {
      (void)cutoff;
      if (!m.port_index_.count(PortId{c.id, port}))
        throw Error(ErrorCode::UnknownReference,
                    "filter on undeclared port " + to_string(PortId{c.id, port}));
    }
  }

  for (std::size_t i = 0; i < m.paths_.size(); ++i) {
    const SignalPath& path = m.paths_[i];
    if (!m.path_index_.emplace(path.id, i).second)
      throw Error(ErrorCode::Validation, "duplicate path id '" + path.id + "'");
    if (path.interfaces.size() != path.delays_ns.size())
      throw Error(ErrorCode::Validation,
                  "path '" + path.id + "': delay list length " +
                      std::to_string(path.delays_ns.size()) + " does not match " +
                      std::to_string(path.interfaces.size()) + " interfaces");
    for (const PortId& port : path.interfaces) {
      if (!m.component_index_.count(port.component))
        throw Error(ErrorCode::UnknownReference,
                    "path '" + path.id + "' references unknown component '" +
                        port.component + "'");
      if (!m.port_index_.count(port))
        throw Error(ErrorCode::UnknownReference,
                    "path '" + path.id + "' references unknown port " + to_string(port));
    }
  }
  return m;
}

const Component* SystemModel::find_component(const std::string& id) const {
  auto it = component_index_.find(id);
  return it == component_index_.end() ? nullptr : &components_[it->second];
}

const Port* SystemModel::find_port(const PortId& id) const {
  auto it = port_index_.find(id);
  if (it == port_index_.end()) return nullptr;
  return &components_[it->second.first].ports[it->second.second];
}

const SignalPath* SystemModel::find_path(const std::string& id) const {
  auto it = path_index_.find(id);
  return it == path_index_.end() ? nullptr : &paths_[it->second];
}

TimeNs SystemModel::filter_cutoff_ns(const PortId& id) const {
  const Component* c = find_component(id.component);
  if (!c) return 0;
  auto it = c->output_filters.find(id.port);
  return it == c->output_filters.end() ? 0 : it->second;
}

std::optional<TimeNs> SystemModel::sampling_band_limit_ns(const PortId& id) const {
  const Port* p = find_port(id);
  if (!p || p->kind != PortKind::Sampling) return std::nullopt;
  return p->band_limit_ns;
}

std::vector<Diagnostic> validate_model(const SystemModel& model) {
  std::vector<Diagnostic> diags;
  auto error = [&diags](std::string msg) {
    diags.push_back({Severity::Error, std::move(msg)});
  };

  for (const Component& c : model.components()) {
    for (const Port& p : c.ports) {
      if (p.kind == PortKind::Sampling && !p.resampling)
        error("port " + to_string(p.id) + ": sampling ports are always resampling");
      if (p.kind == PortKind::Output && p.resampling)
        diags.push_back({Severity::Warning,
                         "port " + to_string(p.id) +
                             ": resampling marks take effect on read interfaces only"});
      if (p.band_limit_ns) {
        if (p.kind != PortKind::Sampling)
          error("port " + to_string(p.id) + ": band_limit_ns is only valid on sampling ports");
        else if (*p.band_limit_ns < 0)
          error("port " + to_string(p.id) + ": band limit must be non-negative");
      }
    }
    for (const auto& [port, cutoff] : c.output_filters) {
      const Port* p = model.find_port(PortId{c.id, port});
      if (p && p->kind != PortKind::Output)
        error("filter on " + to_string(PortId{c.id, port}) + ": filters apply to output ports only");
      if (cutoff < 0)
        error("filter on " + to_string(PortId{c.id, port}) + ": cutoff must be non-negative");
    }
  }

  for (const SignalPath& path : model.paths()) {
    if (path.interfaces.empty()) {
      error("path '" + path.id + "': interface list must be non-empty");
      continue;
    }
    const Port* first = model.find_port(path.interfaces.front());
    if (!first || first->kind != PortKind::Sampling)
      error("path '" + path.id + "': path must start at a sampling port");
    std::set<PortId> seen;
    for (std::size_t i = 0; i < path.interfaces.size(); ++i) {
      const PortId& port = path.interfaces[i];
      if (!seen.insert(port).second)
        error("path '" + path.id + "': cyclic path, interface " + to_string(port) +
              " appears more than once");
      const Port* p = model.find_port(port);
      if (!p)
        error("path '" + path.id + "': unknown port " + to_string(port));
      else if (i > 0 && p->kind == PortKind::Sampling)
        error("path '" + path.id + "': sampling port " + to_string(port) +
              " is only allowed at the start of a path");
    }
    for (std::size_t i = 0; i < path.delays_ns.size(); ++i) {
      if (path.delays_ns[i] < 0)
        error("path '" + path.id + "' interface " + std::to_string(i) +
              ": delay must be non-negative");
      if (is_unbounded(path.delays_ns[i]))
        error("path '" + path.id + "' interface " + std::to_string(i) +
              ": delay must be finite");
    }
    if (path.interfaces.size() != path.delays_ns.size())
      error("path '" + path.id + "': delay list length does not match interface count");
  }
  return diags;
}

std::vector<const SignalPath*> resolve_signal_paths(const SystemModel& model,
                                                    const PortId& subject) {
  if (!model.find_port(subject))
    throw Error(ErrorCode::UnknownReference, "unknown port " + to_string(subject));
  std::vector<const SignalPath*> out;
  for (const SignalPath& path : model.paths()) {
    if (!path.interfaces.empty() && path.interfaces.back() == subject)
      out.push_back(&path);
  }
  std::sort(out.begin(), out.end(),
            [](const SignalPath* a, const SignalPath* b) { return a->id < b->id; });
  return out;
}

}  // namespace sigtime
