#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sigtime/types.hpp"

namespace sigtime {

struct Port {
  PortId id;
  PortKind kind = PortKind::Input;
  bool resampling = false;
  /// Declared band limit of the physical signal behind a sampling port.
  std::optional<TimeNs> band_limit_ns;
};

struct Component {
  std::string id;
  std::vector<Port> ports;
  /// Task/runnable assignment, kept as descriptive metadata only.
  std::vector<std::string> tasks;
  /// Filter cutoff per output port index. Absent means no filtering
  /// (cutoff 0 for band-limit purposes).
  std::map<int, TimeNs> output_filters;
};

/// Ordered interface sequence describing the information flow from a
/// sampling port to the signal's own interface, with the algorithmic
/// delay contributed at each interface.
struct SignalPath {
  std::string id;
  std::vector<PortId> interfaces;
  std::vector<TimeNs> delays_ns;  // parallel to interfaces

  const PortId& sampling_interface() const { return interfaces.front(); }
  const PortId& subject_interface() const { return interfaces.back(); }

  /// Sum of all per-interface delays.
  TimeNs total_delay_ns() const;

  /// Sum of the delays contributed at interface positions [0, position].
  TimeNs prefix_delay_ns(std::size_t position) const;
};

/// Immutable component/port/path description. Construction resolves and
/// indexes all cross-references; analyses only read it afterwards.
class SystemModel {
 public:
  SystemModel() = default;

  /// Throws Error{UnknownReference|Validation} on duplicate ids, dangling
  /// port references or mismatched delay lists. Invariant checks beyond
  /// that are left to validate_model so defective models remain
  /// inspectable.
  static SystemModel build(std::vector<Component> components,
                           std::vector<SignalPath> paths);

  const std::vector<Component>& components() const { return components_; }
  const std::vector<SignalPath>& paths() const { return paths_; }

  const Component* find_component(const std::string& id) const;
  const Port* find_port(const PortId& id) const;
  const SignalPath* find_path(const std::string& id) const;

  /// Declared filter cutoff for an output port, 0 when none.
  TimeNs filter_cutoff_ns(const PortId& id) const;

  /// Declared band limit of a sampling port, if any.
  std::optional<TimeNs> sampling_band_limit_ns(const PortId& id) const;

 private:
  std::vector<Component> components_;
  std::vector<SignalPath> paths_;
  std::map<std::string, std::size_t> component_index_;
  std::map<PortId, std::pair<std::size_t, std::size_t>> port_index_;
  std::map<std::string, std::size_t> path_index_;
};

/// Empty iff every declared-model invariant holds; each entry names the
/// violated invariant and the offending element.
std::vector<Diagnostic> validate_model(const SystemModel& model);

/// Every declared path whose last interface is `subject`, ordered
/// lexicographically by path id. Throws Error{UnknownReference} when the
/// subject port does not exist.
std::vector<const SignalPath*> resolve_signal_paths(const SystemModel& model,
                                                    const PortId& subject);

}  // namespace sigtime
