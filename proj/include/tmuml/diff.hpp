#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "tmuml/errors.hpp"
#include "tmuml/model.hpp"
#include "tmuml/scan.hpp"

namespace tmuml {

enum class DiffKind {
  MissingMachine,
  ExtraMachine,
  MissingFlow,
  ExtraFlow,
  MissingTrigger,
  ExtraTrigger,
  StageMismatch,
};

inline const char* diff_kind_name(DiffKind k) {
  switch (k) {
    case DiffKind::MissingMachine: return "MissingMachine";
    case DiffKind::ExtraMachine: return "ExtraMachine";
    case DiffKind::MissingFlow: return "MissingFlow";
    case DiffKind::ExtraFlow: return "ExtraFlow";
    case DiffKind::MissingTrigger: return "MissingTrigger";
    case DiffKind::ExtraTrigger: return "ExtraTrigger";
    case DiffKind::StageMismatch: return "StageMismatch";
  }
  return "?";
}

struct DiffEntry {
  DiffKind kind = DiffKind::StageMismatch;
  std::string subject;  // machine name path or rendered arc
  std::string detail;

  friend bool operator==(const DiffEntry&, const DiffEntry&) = default;
};

using Diff = std::vector<DiffEntry>;

inline std::string render_diff(const Diff& diff) {
  std::string out;
  for (const DiffEntry& e : diff) {
    out += diff_kind_name(e.kind);
    out += ' ';
    out += e.subject;
    if (!e.detail.empty()) {
      out += ": ";
      out += e.detail;
    }
    out += '\n';
  }
  return out;
}

namespace detail {

// Name path -> machine id, rejecting duplicate sibling names (which would
// make name-based matching ambiguous).
inline std::map<std::string, MachineId> path_index(const StaticModel& model) {
  std::map<std::string, MachineId> out;
  for (const Machine& m : model.machines) {
    auto [it, inserted] = out.emplace(model.name_path(m.id), m.id);
    if (!inserted) throw AmbiguousName(m.name);
  }
  return out;
}

inline std::string machine_shape(const StaticModel& model, MachineId id) {
  const Machine& m = model.at(id);
  std::vector<std::string> parts;
  for (const Stage& s : m.stages) {
    std::string p = port_name(s.kind);
    if (s.decreate) p += "(decreate)";
    parts.push_back(std::move(p));
  }
  std::sort(parts.begin(), parts.end());
  std::string out = "role=";
  out += role_name(m.role);
  out += " stages={";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  out += "} storage=";
  out += std::to_string(m.storage_count);
  return out;
}

// Arcs rendered by machine name paths, so two models agree on a key exactly
// when they agree on the arc up to id renaming. Multiset comparison.
template <typename Arc>
std::vector<std::string> arc_keys(const StaticModel& model, const std::vector<Arc>& arcs,
                                  const std::optional<std::string> Arc::*text) {
  std::vector<std::string> keys;
  keys.reserve(arcs.size());
  for (const Arc& a : arcs) {
    std::string key = model.endpoint_path(a.from) + " -> " + model.endpoint_path(a.to);
    if (a.*text) key += " " + quote(*(a.*text));
    keys.push_back(std::move(key));
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

inline void diff_multisets(const std::vector<std::string>& a, const std::vector<std::string>& b,
                           DiffKind missing, DiffKind extra, Diff& out) {
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      out.push_back({missing, a[i], ""});
      ++i;
    } else if (i == a.size() || b[j] < a[i]) {
      out.push_back({extra, b[j], ""});
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
}

}  // namespace detail

// Compares two models by machine name paths, ignoring internal ids and
// declaration order. Empty diff means structural equality up to id renaming.
// Every discrepancy is reported exactly once, "missing" meaning present in
// `a` but not `b` and "extra" the reverse.
inline Diff structural_diff(const StaticModel& a, const StaticModel& b) {
  Diff out;
  auto index_a = detail::path_index(a);
  auto index_b = detail::path_index(b);

  for (const auto& [path, id] : index_a) {
    auto it = index_b.find(path);
    if (it == index_b.end()) {
      out.push_back({DiffKind::MissingMachine, path, ""});
    } else {
      std::string shape_a = detail::machine_shape(a, id);
      std::string shape_b = detail::machine_shape(b, it->second);
      if (shape_a != shape_b)
        out.push_back({DiffKind::StageMismatch, path, shape_a + " vs " + shape_b});
    }
  }
  for (const auto& [path, id] : index_b) {
    if (!index_a.contains(path)) out.push_back({DiffKind::ExtraMachine, path, ""});
  }

  detail::diff_multisets(detail::arc_keys(a, a.flows, &FlowArc::label),
                         detail::arc_keys(b, b.flows, &FlowArc::label),
                         DiffKind::MissingFlow, DiffKind::ExtraFlow, out);
  detail::diff_multisets(detail::arc_keys(a, a.triggers, &TriggerArc::condition),
                         detail::arc_keys(b, b.triggers, &TriggerArc::condition),
                         DiffKind::MissingTrigger, DiffKind::ExtraTrigger, out);
  return out;
}

}  // namespace tmuml
