#pragma once

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "tmuml/errors.hpp"
#include "tmuml/events.hpp"
#include "tmuml/model.hpp"
#include "tmuml/scan.hpp"

namespace tmuml {

// The three presentation levels of one system: the time-free static model,
// the static model with event regions overlaid, and the behavior graph.
struct RenderView {
  enum class Level { Static, Events, Behavior };

  Level view = Level::Static;
  bool show_storage = true;
  bool condition_labels = true;
};

namespace detail {

inline std::string node_id(const StaticModel& model, const Endpoint& e) {
  return quote(model.endpoint_path(e));
}

inline void emit_machine_cluster(const StaticModel& model, MachineId id, int depth,
                                 bool show_storage, std::string& out) {
  const Machine& m = model.at(id);
  std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  out += indent + "subgraph " + quote("cluster_" + model.name_path(id)) + " {\n";
  out += indent + "  label=" + quote(m.name) + ";\n";
  static constexpr PortKind order[] = {PortKind::Create,   PortKind::Process,
                                       PortKind::Release,  PortKind::Receive,
                                       PortKind::TransferIn, PortKind::TransferOut};
  for (PortKind kind : order) {
    const Stage* s = m.find_stage(kind);
    if (!s) continue;
    std::string label = s->decreate ? "decreate" : port_name(kind);
    out += indent + "  " + node_id(model, {id, kind}) + " [label=" + quote(label) + "];\n";
  }
  if (show_storage && m.has_storage())
    out += indent + "  " + node_id(model, {id, PortKind::Storage}) +
           " [label=\"storage\" shape=cylinder];\n";
  for (MachineId child : model.children_by_name(id))
    emit_machine_cluster(model, child, depth + 1, show_storage, out);
  out += indent + "}\n";
}

inline bool endpoint_drawn(const StaticModel& model, const Endpoint& e, bool show_storage) {
  if (!model.valid_id(e.machine) || !model.at(e.machine).has_port(e.port)) return false;
  return show_storage || e.port != PortKind::Storage;
}

inline void emit_static_body(const StaticModel& model, const RenderView& view, std::string& out) {
  for (MachineId root : model.roots_by_name())
    emit_machine_cluster(model, root, 1, view.show_storage, out);

  auto key = [&](const Endpoint& from, const Endpoint& to,
                 const std::optional<std::string>& text) {
    return std::make_tuple(model.endpoint_path(from), model.endpoint_path(to),
                           text.value_or(""));
  };
  std::vector<FlowArc> flows = model.flows;
  std::stable_sort(flows.begin(), flows.end(), [&](const FlowArc& a, const FlowArc& b) {
    return key(a.from, a.to, a.label) < key(b.from, b.to, b.label);
  });
  for (const FlowArc& f : flows) {
    if (!endpoint_drawn(model, f.from, view.show_storage) ||
        !endpoint_drawn(model, f.to, view.show_storage))
      continue;
    out += "  " + node_id(model, f.from) + " -> " + node_id(model, f.to);
    if (f.label) out += " [label=" + quote(*f.label) + "]";
    out += ";\n";
  }
  std::vector<TriggerArc> triggers = model.triggers;
  std::stable_sort(triggers.begin(), triggers.end(), [&](const TriggerArc& a, const TriggerArc& b) {
    return key(a.from, a.to, a.condition) < key(b.from, b.to, b.condition);
  });
  for (const TriggerArc& t : triggers) {
    if (!endpoint_drawn(model, t.from, view.show_storage) ||
        !endpoint_drawn(model, t.to, view.show_storage))
      continue;
    out += "  " + node_id(model, t.from) + " -> " + node_id(model, t.to) + " [style=dashed";
    if (t.condition && view.condition_labels) out += " label=" + quote(*t.condition);
    out += "];\n";
  }
}

}  // namespace detail

// Emits a deterministic DOT digraph for the chosen view. Machines become
// nested clusters following containment, flows solid edges, triggers dashed
// ones. The events view adds one cluster per region (with proxy member
// nodes, since regions may overlap); the behavior view draws events and
// their successions.
inline std::string emit_dot(const StaticModel& model, const std::vector<EventDef>* events,
                            const BehaviorGraph* graph, const RenderView& view) {
  std::string out;
  switch (view.view) {
    case RenderView::Level::Static: {
      out = "digraph tm_static {\n  rankdir=LR;\n  node [shape=box];\n";
      detail::emit_static_body(model, view, out);
      out += "}\n";
      return out;
    }
    case RenderView::Level::Events: {
      if (!events) throw MissingInput("events view needs event definitions");
      out = "digraph tm_events {\n  rankdir=LR;\n  node [shape=box];\n";
      detail::emit_static_body(model, view, out);
      std::vector<const EventDef*> sorted;
      for (const EventDef& e : *events) sorted.push_back(&e);
      std::sort(sorted.begin(), sorted.end(),
                [](const EventDef* a, const EventDef* b) { return a->id < b->id; });
      for (const EventDef* e : sorted) {
        out += "  subgraph " + detail::quote("cluster_event_" + e->id) + " {\n";
        out += "    label=" + detail::quote(e->id) + ";\n";
        std::vector<std::string> members;
        for (const RegionMember& m : e->region)
          members.push_back(detail::member_text(model, m));
        std::sort(members.begin(), members.end());
        for (const std::string& m : members)
          out += "    " + detail::quote(e->id + "::" + m) + " [label=" + detail::quote(m) +
                 " shape=plaintext];\n";
        out += "  }\n";
      }
      out += "}\n";
      return out;
    }
    case RenderView::Level::Behavior: {
      if (!graph) throw MissingInput("behavior view needs a behavior graph");
      out = "digraph tm_behavior {\n  rankdir=LR;\n  node [shape=box];\n";
      for (const auto& [id, e] : graph->events)
        out += "  " + detail::quote(id) + " [label=" + detail::quote(id) + "];\n";
      std::vector<BehaviorEdge> edges = graph->edges;
      std::sort(edges.begin(), edges.end());
      for (const BehaviorEdge& e : edges) {
        out += "  " + detail::quote(e.from) + " -> " + detail::quote(e.to);
        if (e.kind == EdgeKind::Trigger) out += " [style=dashed]";
        out += ";\n";
      }
      out += "}\n";
      return out;
    }
  }
  throw MissingInput("unknown view");
}

}  // namespace tmuml
