#pragma once

#include <array>
#include <set>
#include <string>

#include "tmuml/model.hpp"
#include "tmuml/report.hpp"

namespace tmuml {

// Finding codes emitted by validate_static.
namespace codes {
inline constexpr const char* flow_adj = "FLOW_ADJ";            // V1
inline constexpr const char* dup_stage = "DUP_STAGE";          // V2
inline constexpr const char* dup_storage = "DUP_STORAGE";      // V3
inline constexpr const char* trigger_target = "TRIGGER_TARGET";  // V4
inline constexpr const char* trigger_source = "TRIGGER_SOURCE";  // V4
inline constexpr const char* unresolved_ref = "UNRESOLVED_REF";  // V5
inline constexpr const char* containment = "CONTAINMENT";      // V6
inline constexpr const char* decreate_kind = "DECREATE_KIND";
}  // namespace codes

namespace detail {

// Legal solid-flow successions inside one machine.
inline bool intra_flow_allowed(PortKind from, PortKind to) {
  switch (from) {
    case PortKind::TransferIn: return to == PortKind::Receive;
    case PortKind::Receive: return to == PortKind::Process || to == PortKind::Release;
    case PortKind::Create: return to == PortKind::Process || to == PortKind::Release;
    case PortKind::Process: return to == PortKind::Release;
    case PortKind::Release: return to == PortKind::TransferOut;
    default: return false;
  }
}

inline bool store_allowed(PortKind from) {
  return from == PortKind::Create || from == PortKind::Process ||
         from == PortKind::Receive || from == PortKind::Release;
}

inline bool retrieve_allowed(PortKind to) {
  return to == PortKind::Process || to == PortKind::Release;
}

}  // namespace detail

// Checks the well-formedness rules over a structurally parsed model:
//   V1 solid flows follow the stage adjacency table
//   V2 at most one stage per kind (transfer counted per direction)
//   V3 at most one storage node per machine
//   V4 triggers land on create or process and originate from a stage
//   V5 arcs reference declared machines and ports
//   V6 containment is a forest
// Everything is reported, nothing thrown; an empty report means well-formed.
inline ValidationReport validate_static(const StaticModel& model) {
  ValidationReport report;
  auto add = [&](const char* code, std::string location, std::string message,
                 Severity sev = Severity::Error) {
    report.push_back({sev, code, std::move(location), std::move(message)});
  };

  // V6 first: paths used in other findings assume a sane forest.
  for (const Machine& m : model.machines) {
    if (m.parent && !model.valid_id(*m.parent)) {
      add(codes::containment, m.name, "parent reference is not a declared machine");
      continue;
    }
    std::optional<MachineId> cur = m.parent;
    std::size_t hops = 0;
    while (cur) {
      if (*cur == m.id) {
        add(codes::containment, m.name, "machine is its own ancestor");
        break;
      }
      if (++hops > model.machines.size()) break;
      cur = model.at(*cur).parent;
    }
  }

  for (const Machine& m : model.machines) {
    const std::string path = model.name_path(m.id);
    std::set<PortKind> seen;
    std::set<PortKind> reported;
    for (const Stage& s : m.stages) {
      if (!seen.insert(s.kind).second && reported.insert(s.kind).second)
        add(codes::dup_stage, path, std::string("more than one ") + port_name(s.kind) + " stage");
      if (s.decreate && s.kind != PortKind::Create)
        add(codes::decreate_kind, path,
            std::string("decreate on a ") + port_name(s.kind) + " stage");
    }
    if (m.storage_count > 1) add(codes::dup_storage, path, "more than one storage node");
  }

  auto endpoint_ok = [&](const Endpoint& e, const std::string& location) {
    if (!model.valid_id(e.machine)) {
      add(codes::unresolved_ref, location, "arc references an undeclared machine");
      return false;
    }
    if (!model.at(e.machine).has_port(e.port)) {
      add(codes::unresolved_ref, location,
          model.name_path(e.machine) + " has no " + port_name(e.port));
      return false;
    }
    return true;
  };

  for (const FlowArc& f : model.flows) {
    const std::string location =
        model.endpoint_path(f.from) + " -> " + model.endpoint_path(f.to);
    bool from_ok = endpoint_ok(f.from, location);
    bool to_ok = endpoint_ok(f.to, location);
    if (!from_ok || !to_ok) continue;
    bool from_storage = f.from.port == PortKind::Storage;
    bool to_storage = f.to.port == PortKind::Storage;
    if (from_storage && to_storage) {
      add(codes::flow_adj, location, "storage cannot flow to storage");
    } else if (to_storage) {
      if (f.from.machine != f.to.machine)
        add(codes::flow_adj, location, "store arcs stay within one machine");
      else if (!detail::store_allowed(f.from.port))
        add(codes::flow_adj, location,
            std::string(port_name(f.from.port)) + " cannot store");
    } else if (from_storage) {
      if (f.from.machine != f.to.machine)
        add(codes::flow_adj, location, "retrieve arcs stay within one machine");
      else if (!detail::retrieve_allowed(f.to.port))
        add(codes::flow_adj, location,
            std::string("storage cannot flow to ") + port_name(f.to.port));
    } else if (f.from.machine == f.to.machine) {
      if (!detail::intra_flow_allowed(f.from.port, f.to.port))
        add(codes::flow_adj, location,
            std::string(port_name(f.from.port)) + " -> " + port_name(f.to.port) +
                " is not a legal stage succession");
    } else {
      if (f.from.port != PortKind::TransferOut || f.to.port != PortKind::TransferIn)
        add(codes::flow_adj, location,
            "inter-machine flows go transfer.out -> transfer.in");
    }
  }

  for (const TriggerArc& t : model.triggers) {
    const std::string location =
        model.endpoint_path(t.from) + " -> " + model.endpoint_path(t.to);
    bool from_ok = endpoint_ok(t.from, location);
    bool to_ok = endpoint_ok(t.to, location);
    if (from_ok && t.from.port == PortKind::Storage)
      add(codes::trigger_source, location, "triggers originate from a stage, not storage");
    if (to_ok && t.to.port != PortKind::Create && t.to.port != PortKind::Process)
      add(codes::trigger_target, location, "triggers land on create or process");
  }

  sort_report(report);
  return report;
}

}  // namespace tmuml
