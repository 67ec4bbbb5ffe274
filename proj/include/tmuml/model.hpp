#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tmuml/errors.hpp"

namespace tmuml {

// An addressable port of a machine: one of the five generic stages (transfer
// split into directed in/out ports) or the machine's storage node.
enum class PortKind : std::uint8_t {
  Create,
  Process,
  Release,
  Receive,
  TransferIn,
  TransferOut,
  Storage,
};

inline const char* port_name(PortKind p) {
  switch (p) {
    case PortKind::Create: return "create";
    case PortKind::Process: return "process";
    case PortKind::Release: return "release";
    case PortKind::Receive: return "receive";
    case PortKind::TransferIn: return "transfer.in";
    case PortKind::TransferOut: return "transfer.out";
    case PortKind::Storage: return "storage";
  }
  return "?";
}

inline std::optional<PortKind> parse_port_name(std::string_view s) {
  if (s == "create") return PortKind::Create;
  if (s == "process") return PortKind::Process;
  if (s == "release") return PortKind::Release;
  if (s == "receive") return PortKind::Receive;
  if (s == "transfer.in") return PortKind::TransferIn;
  if (s == "transfer.out") return PortKind::TransferOut;
  if (s == "storage") return PortKind::Storage;
  return std::nullopt;
}

enum class Role : std::uint8_t {
  Generic,
  ActorRegion,
  Subject,
  UsecaseMachine,
  ClassMachine,
  AttributeMachine,
};

inline const char* role_name(Role r) {
  switch (r) {
    case Role::Generic: return "generic";
    case Role::ActorRegion: return "actor-region";
    case Role::Subject: return "subject";
    case Role::UsecaseMachine: return "usecase-machine";
    case Role::ClassMachine: return "class-machine";
    case Role::AttributeMachine: return "attribute-machine";
  }
  return "?";
}

inline std::optional<Role> parse_role_name(std::string_view s) {
  if (s == "generic") return Role::Generic;
  if (s == "actor-region") return Role::ActorRegion;
  if (s == "subject") return Role::Subject;
  if (s == "usecase-machine") return Role::UsecaseMachine;
  if (s == "class-machine") return Role::ClassMachine;
  if (s == "attribute-machine") return Role::AttributeMachine;
  return std::nullopt;
}

// A stage node. `decreate` marks the reversed create used for deletion and is
// only meaningful when kind is Create; validation flags it anywhere else.
struct Stage {
  PortKind kind = PortKind::Create;
  bool decreate = false;

  friend bool operator==(const Stage&, const Stage&) = default;
};

using MachineId = std::uint32_t;

// A thimac: a thing that is simultaneously a machine. Stages are kept as a
// list (not a keyed set) so that duplicate declarations survive construction
// and can be reported by validate_static.
struct Machine {
  MachineId id = 0;
  std::string name;
  Role role = Role::Generic;
  std::optional<MachineId> parent;
  std::vector<Stage> stages;
  int storage_count = 0;

  bool has_storage() const { return storage_count > 0; }

  bool has_stage(PortKind k) const {
    return std::any_of(stages.begin(), stages.end(),
                       [k](const Stage& s) { return s.kind == k; });
  }

  bool has_port(PortKind k) const {
    return k == PortKind::Storage ? has_storage() : has_stage(k);
  }

  const Stage* find_stage(PortKind k) const {
    for (const Stage& s : stages)
      if (s.kind == k) return &s;
    return nullptr;
  }
};

// One endpoint of an arc: a stage or storage node of a machine.
struct Endpoint {
  MachineId machine = 0;
  PortKind port = PortKind::Create;

  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

// Solid arc: a thing moves from one stage to the next.
struct FlowArc {
  Endpoint from;
  Endpoint to;
  std::optional<std::string> label;

  friend auto operator<=>(const FlowArc&, const FlowArc&) = default;
};

// Dashed arc: starts a new flow in another machine; nothing moves along it.
struct TriggerArc {
  Endpoint from;
  Endpoint to;
  std::optional<std::string> condition;

  friend auto operator<=>(const TriggerArc&, const TriggerArc&) = default;
};

// The singular time-free TM diagram: a forest of machines plus flow arcs,
// trigger arcs and the method names bound later at the behavior level.
// Machines are addressed internally by index; the public identity of a
// machine is its dotted name path from a root (e.g. "System.Invoice.ID").
class StaticModel {
 public:
  std::vector<Machine> machines;
  std::vector<FlowArc> flows;
  std::vector<TriggerArc> triggers;
  std::vector<std::string> declared_methods;

  bool valid_id(MachineId id) const { return id < machines.size(); }

  Machine& at(MachineId id) { return machines.at(id); }
  const Machine& at(MachineId id) const { return machines.at(id); }

  MachineId add_machine(std::string name, Role role = Role::Generic,
                        std::optional<MachineId> parent = std::nullopt) {
    Machine m;
    m.id = static_cast<MachineId>(machines.size());
    m.name = std::move(name);
    m.role = role;
    m.parent = parent;
    machines.push_back(std::move(m));
    return machines.back().id;
  }

  // Children in declaration order.
  std::vector<MachineId> children(MachineId id) const {
    std::vector<MachineId> out;
    for (const Machine& m : machines)
      if (m.parent && *m.parent == id) out.push_back(m.id);
    return out;
  }

  std::vector<MachineId> roots() const {
    std::vector<MachineId> out;
    for (const Machine& m : machines)
      if (!m.parent) out.push_back(m.id);
    return out;
  }

  std::vector<MachineId> children_by_name(MachineId id) const {
    auto out = children(id);
    sort_by_name(out);
    return out;
  }

  std::vector<MachineId> roots_by_name() const {
    auto out = roots();
    sort_by_name(out);
    return out;
  }

  // Dotted name path from the root, e.g. "System.Invoice.ID". Walks are
  // hop-limited so a corrupt parent cycle cannot hang the caller.
  std::string name_path(MachineId id) const {
    std::vector<std::string_view> parts;
    std::optional<MachineId> cur = id;
    for (std::size_t hops = 0; cur && hops <= machines.size(); ++hops) {
      if (!valid_id(*cur)) break;
      parts.push_back(at(*cur).name);
      cur = at(*cur).parent;
    }
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
      if (!out.empty()) out += '.';
      out += *it;
    }
    return out;
  }

  std::string endpoint_path(const Endpoint& e) const {
    std::string out = valid_id(e.machine) ? name_path(e.machine)
                                          : "#" + std::to_string(e.machine);
    out += '.';
    out += port_name(e.port);
    return out;
  }

  // True when `anc` is a proper ancestor of `id`.
  bool is_ancestor(MachineId anc, MachineId id) const {
    std::optional<MachineId> cur = at(id).parent;
    for (std::size_t hops = 0; cur && hops <= machines.size(); ++hops) {
      if (*cur == anc) return true;
      if (!valid_id(*cur)) return false;
      cur = at(*cur).parent;
    }
    return false;
  }

  // Resolves a dotted machine path written as a suffix of a full name path.
  // "ID" resolves if exactly one machine is named ID; "Invoice.ID" narrows
  // it down; a complete root-anchored path always beats mere suffix matches,
  // so canonical output re-parses even when one full path is a suffix of
  // another. Returns all candidates so callers can distinguish unknown from
  // ambiguous references.
  std::vector<MachineId> resolve_suffix(const std::vector<std::string>& segments) const {
    std::vector<MachineId> suffix_matches;
    std::vector<MachineId> anchored;
    if (segments.empty()) return suffix_matches;
    for (const Machine& m : machines) {
      std::optional<MachineId> cur = m.id;
      bool ok = true;
      for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
        if (!cur || !valid_id(*cur) || at(*cur).name != *it) {
          ok = false;
          break;
        }
        cur = at(*cur).parent;
      }
      if (!ok) continue;
      suffix_matches.push_back(m.id);
      if (!cur) anchored.push_back(m.id);
    }
    return anchored.empty() ? suffix_matches : anchored;
  }

  MachineId ensure_stage(MachineId id, PortKind kind, bool decreate = false) {
    if (!at(id).has_stage(kind)) at(id).stages.push_back({kind, decreate});
    return id;
  }

  void ensure_storage(MachineId id) {
    if (at(id).storage_count == 0) at(id).storage_count = 1;
  }

  void ensure_flow(Endpoint from, Endpoint to,
                   std::optional<std::string> label = std::nullopt) {
    for (const FlowArc& f : flows)
      if (f.from == from && f.to == to && f.label == label) return;
    flows.push_back({from, to, std::move(label)});
  }

  void add_trigger(Endpoint from, Endpoint to,
                   std::optional<std::string> condition = std::nullopt) {
    triggers.push_back({from, to, std::move(condition)});
  }

 private:
  void sort_by_name(std::vector<MachineId>& ids) const {
    std::stable_sort(ids.begin(), ids.end(), [this](MachineId a, MachineId b) {
      return at(a).name < at(b).name;
    });
  }
};

namespace detail {

// Reserved words that may not be used as machine names: structural keywords
// plus everything that can trail a dotted reference. Case-insensitive, since
// event files accept stage names in any letter case.
inline bool reserved_name(std::string_view s) {
  static constexpr std::string_view words[] = {
      "machine", "stage", "storage", "flow", "trigger", "method", "role",
      "label",   "when",  "create",  "process", "release", "receive",
      "transfer", "in",   "out",     "decreate",
  };
  std::string folded(s);
  for (char& c : folded)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return std::find(std::begin(words), std::end(words), folded) != std::end(words);
}

inline bool identifier_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

inline bool identifier_char(char c) {
  return identifier_start(c) || (c >= '0' && c <= '9');
}

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !identifier_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), identifier_char);
}

inline std::vector<std::string> split_dotted(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '.') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string join_path(const std::vector<std::string>& segs) {
  std::string out;
  for (const std::string& s : segs) {
    if (!out.empty()) out += '.';
    out += s;
  }
  return out;
}

}  // namespace detail

}  // namespace tmuml
