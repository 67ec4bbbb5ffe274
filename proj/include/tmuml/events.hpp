#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tmuml/errors.hpp"
#include "tmuml/model.hpp"
#include "tmuml/report.hpp"
#include "tmuml/scan.hpp"

namespace tmuml {

// Finding codes for the dynamic level.
namespace codes {
inline constexpr const char* region_empty = "REGION_EMPTY";
inline constexpr const char* region_disconnected = "REGION_DISCONNECTED";
inline constexpr const char* uncovered_element = "UNCOVERED_ELEMENT";
inline constexpr const char* path_broken = "PATH_BROKEN";
inline constexpr const char* unknown_event = "UNKNOWN_EVENT";
}  // namespace codes

// One element of an event region: a machine, a stage/storage port, or an
// arc of the static model.
struct RegionMember {
  enum class Kind { Machine, Port, Flow, Trigger };

  Kind kind = Kind::Machine;
  MachineId machine = 0;               // Machine and Port members
  PortKind port = PortKind::Create;    // Port members
  std::size_t arc_index = 0;           // Flow and Trigger members

  friend auto operator<=>(const RegionMember&, const RegionMember&) = default;
};

// An event: a named region of the static model (the dynamic level keeps a
// reference into the static level, never the other way around).
struct EventDef {
  std::string id;
  std::string description;
  std::vector<RegionMember> region;

  friend bool operator==(const EventDef&, const EventDef&) = default;
};

enum class EdgeKind : std::uint8_t { Sequence, Trigger };

struct BehaviorEdge {
  std::string from;
  std::string to;
  EdgeKind kind = EdgeKind::Sequence;

  friend auto operator<=>(const BehaviorEdge&, const BehaviorEdge&) = default;
};

// Events plus their permitted successions; class methods are paths in it.
struct BehaviorGraph {
  std::map<std::string, EventDef> events;
  std::vector<BehaviorEdge> edges;
  std::map<std::string, std::vector<std::string>> methods;

  bool has_edge(const std::string& from, const std::string& to) const {
    return std::any_of(edges.begin(), edges.end(), [&](const BehaviorEdge& e) {
      return e.from == from && e.to == to;
    });
  }
};

// A simulated chronology of events.
struct Trace {
  std::uint32_t seed = 0;
  std::vector<std::string> steps;

  friend bool operator==(const Trace&, const Trace&) = default;
};

// Thrown by build_behavior when a method path uses a missing edge.
struct PathBroken : Error {
  explicit PathBroken(ValidationReport findings)
      : Error("method paths broken: " + std::to_string(findings.size()) + " finding(s)"),
        findings(std::move(findings)) {}

  ValidationReport findings;
};

namespace detail {

inline std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Member references accept stage names in any letter case ("System.Receive"
// and "System.receive" both address the receive stage); a trailing segment
// that is not a stage name addresses a nested machine.
struct MemberRef {
  std::vector<std::string> path;
  std::optional<PortKind> port;
};

inline MemberRef split_member_ref(const Token& tok) {
  MemberRef out;
  auto segs = split_dotted(tok.text);
  for (const std::string& s : segs)
    if (s.empty()) throw ParseError(tok.line, tok.column, "empty path segment");
  if (segs.size() >= 3) {
    std::string tail = lowercase(segs[segs.size() - 2]) + "." + lowercase(segs.back());
    if (auto port = parse_port_name(tail)) {
      out.port = *port;
      segs.resize(segs.size() - 2);
      out.path = std::move(segs);
      return out;
    }
  }
  if (segs.size() >= 2) {
    if (lowercase(segs.back()) == "transfer")
      throw ParseError(tok.line, tok.column, "transfer requires a direction (.in or .out)");
    if (auto port = parse_port_name(lowercase(segs.back()))) {
      out.port = *port;
      segs.pop_back();
    }
  }
  out.path = std::move(segs);
  return out;
}

inline MachineId resolve_member_machine(const StaticModel& model,
                                        const std::vector<std::string>& path,
                                        const Token& tok) {
  auto matches = model.resolve_suffix(path);
  if (matches.empty()) throw UnknownReference(join_path(path));
  if (matches.size() > 1)
    throw ParseError(tok.line, tok.column, "ambiguous machine reference: " + join_path(path));
  return matches.front();
}

inline std::string member_text(const StaticModel& model, const RegionMember& m) {
  switch (m.kind) {
    case RegionMember::Kind::Machine:
      return model.name_path(m.machine);
    case RegionMember::Kind::Port:
      return model.endpoint_path({m.machine, m.port});
    case RegionMember::Kind::Flow: {
      const FlowArc& f = model.flows.at(m.arc_index);
      return model.endpoint_path(f.from) + " -> " + model.endpoint_path(f.to);
    }
    case RegionMember::Kind::Trigger: {
      const TriggerArc& t = model.triggers.at(m.arc_index);
      return model.endpoint_path(t.from) + " -> " + model.endpoint_path(t.to);
    }
  }
  return "?";
}

}  // namespace detail

// Parses the events file against a static model:
//   event <Id> "<description>" = { <member>, ... }
//   edge <Id> -> <Id> [trigger]
//   method <Name> = <Id> -> <Id> -> ...
// Members are machine paths, stage/storage references, or arcs written
// `from -> to`. Everything must resolve in the model.
inline std::pair<std::vector<EventDef>, BehaviorGraph> parse_events(std::string_view text,
                                                                    const StaticModel& model) {
  using detail::Token;
  detail::Scanner scan(text);
  std::vector<EventDef> events;
  std::set<std::string> ids;
  std::vector<BehaviorEdge> raw_edges;
  struct RawMethod {
    std::string name;
    std::vector<std::string> path;
    Token tok;
  };
  std::vector<RawMethod> raw_methods;

  auto expect = [&](Token::Kind kind, const char* what) {
    Token t = scan.take();
    if (t.kind != kind) throw ParseError(t.line, t.column, std::string("expected ") + what);
    return t;
  };

  auto parse_member = [&]() -> RegionMember {
    Token t = expect(Token::Kind::Word, "a region member");
    auto ref = detail::split_member_ref(t);
    MachineId first = detail::resolve_member_machine(model, ref.path, t);
    if (scan.peek_token().kind == Token::Kind::Arrow) {
      scan.take();
      Token t2 = expect(Token::Kind::Word, "an arc target");
      auto ref2 = detail::split_member_ref(t2);
      if (!ref.port || !ref2.port)
        throw ParseError(t.line, t.column, "arc members connect stage references");
      Endpoint from{first, *ref.port};
      Endpoint to{detail::resolve_member_machine(model, ref2.path, t2), *ref2.port};
      for (std::size_t i = 0; i < model.flows.size(); ++i)
        if (model.flows[i].from == from && model.flows[i].to == to)
          return {RegionMember::Kind::Flow, 0, PortKind::Create, i};
      for (std::size_t i = 0; i < model.triggers.size(); ++i)
        if (model.triggers[i].from == from && model.triggers[i].to == to)
          return {RegionMember::Kind::Trigger, 0, PortKind::Create, i};
      throw UnknownReference(model.endpoint_path(from) + " -> " + model.endpoint_path(to));
    }
    if (ref.port) {
      if (!model.at(first).has_port(*ref.port))
        throw UnknownReference(model.endpoint_path({first, *ref.port}));
      return {RegionMember::Kind::Port, first, *ref.port, 0};
    }
    return {RegionMember::Kind::Machine, first, PortKind::Create, 0};
  };

  for (;;) {
    Token t = scan.take();
    if (t.kind == Token::Kind::End) break;
    if (t.kind != Token::Kind::Word)
      throw ParseError(t.line, t.column, "expected event, edge or method");
    if (t.text == "event") {
      Token id = expect(Token::Kind::Word, "an event id");
      if (!detail::is_identifier(id.text))
        throw ParseError(id.line, id.column, "invalid event id: " + id.text);
      if (!ids.insert(id.text).second) throw DuplicateEventId(id.text);
      Token desc = expect(Token::Kind::String, "a quoted description");
      expect(Token::Kind::Eq, "'='");
      expect(Token::Kind::LBrace, "'{'");
      EventDef ev{id.text, desc.text, {}};
      if (scan.peek_token().kind != Token::Kind::RBrace) {
        for (;;) {
          ev.region.push_back(parse_member());
          if (scan.peek_token().kind == Token::Kind::Comma) {
            scan.take();
            continue;
          }
          break;
        }
      }
      expect(Token::Kind::RBrace, "'}'");
      events.push_back(std::move(ev));
    } else if (t.text == "edge") {
      Token from = expect(Token::Kind::Word, "an event id");
      expect(Token::Kind::Arrow, "'->'");
      Token to = expect(Token::Kind::Word, "an event id");
      EdgeKind kind = EdgeKind::Sequence;
      if (scan.peek_token().kind == Token::Kind::Word && scan.peek_token().text == "trigger") {
        scan.take();
        kind = EdgeKind::Trigger;
      }
      raw_edges.push_back({from.text, to.text, kind});
    } else if (t.text == "method") {
      Token name = expect(Token::Kind::Word, "a method name");
      if (!detail::is_identifier(name.text))
        throw ParseError(name.line, name.column, "invalid method name: " + name.text);
      expect(Token::Kind::Eq, "'='");
      std::vector<std::string> path;
      path.push_back(expect(Token::Kind::Word, "an event id").text);
      while (scan.peek_token().kind == Token::Kind::Arrow) {
        scan.take();
        path.push_back(expect(Token::Kind::Word, "an event id").text);
      }
      raw_methods.push_back({name.text, std::move(path), name});
    } else {
      throw ParseError(t.line, t.column, "unknown declaration: " + t.text);
    }
  }

  BehaviorGraph graph;
  for (const EventDef& ev : events) graph.events.emplace(ev.id, ev);
  for (BehaviorEdge& edge : raw_edges) {
    if (!ids.contains(edge.from)) throw UnknownReference(edge.from);
    if (!ids.contains(edge.to)) throw UnknownReference(edge.to);
    graph.edges.push_back(std::move(edge));
  }
  for (RawMethod& method : raw_methods) {
    for (const std::string& id : method.path)
      if (!ids.contains(id)) throw UnknownReference(id);
    if (graph.methods.contains(method.name))
      throw ParseError(method.tok.line, method.tok.column, "duplicate method: " + method.name);
    graph.methods.emplace(std::move(method.name), std::move(method.path));
  }
  return {std::move(events), std::move(graph)};
}

// Canonical events text: events sorted by id with members sorted, then
// edges, then methods. parse_events(print_events(...)) round-trips.
inline std::string print_events(const std::vector<EventDef>& events, const BehaviorGraph& graph,
                                const StaticModel& model) {
  std::string out = "# events\n";
  std::vector<const EventDef*> sorted;
  for (const EventDef& e : events) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const EventDef* a, const EventDef* b) { return a->id < b->id; });
  for (const EventDef* e : sorted) {
    out += "event " + e->id + ' ' + detail::quote(e->description) + " = {";
    std::vector<std::string> members;
    for (const RegionMember& m : e->region) members.push_back(detail::member_text(model, m));
    std::sort(members.begin(), members.end());
    for (std::size_t i = 0; i < members.size(); ++i) {
      out += i ? ", " : " ";
      out += members[i];
    }
    out += " }\n";
  }
  std::vector<BehaviorEdge> edges = graph.edges;
  std::sort(edges.begin(), edges.end());
  for (const BehaviorEdge& e : edges) {
    out += "edge " + e.from + " -> " + e.to;
    if (e.kind == EdgeKind::Trigger) out += " trigger";
    out += '\n';
  }
  for (const auto& [name, path] : graph.methods) {
    out += "method " + name + " =";
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i) out += " ->";
      out += ' ' + path[i];
    }
    out += '\n';
  }
  return out;
}

namespace detail {

// Region adjacency. Two members touch when a model arc directly connects
// elements they cover, or when one member's machine contains the other's.
// A machine member covers its whole subtree for arc purposes.
class RegionConnectivity {
 public:
  RegionConnectivity(const StaticModel& model, const std::vector<RegionMember>& members)
      : model_(model), members_(members) {}

  bool adjacent(std::size_t i, std::size_t j) const {
    const RegionMember& a = members_[i];
    const RegionMember& b = members_[j];
    bool a_arc = a.kind == RegionMember::Kind::Flow || a.kind == RegionMember::Kind::Trigger;
    bool b_arc = b.kind == RegionMember::Kind::Flow || b.kind == RegionMember::Kind::Trigger;
    if (a_arc && b_arc) {
      auto [af, at] = arc_endpoints(a);
      auto [bf, bt] = arc_endpoints(b);
      return af == bf || af == bt || at == bf || at == bt;
    }
    if (a_arc || b_arc) {
      const RegionMember& arc = a_arc ? a : b;
      const RegionMember& other = a_arc ? b : a;
      auto [from, to] = arc_endpoints(arc);
      return covers(other, from) || covers(other, to);
    }
    // containment: one member's machine is the other's machine or ancestor
    if (a.machine == b.machine || model_.is_ancestor(a.machine, b.machine) ||
        model_.is_ancestor(b.machine, a.machine))
      return true;
    for (const FlowArc& f : model_.flows)
      if ((covers(a, f.from) && covers(b, f.to)) || (covers(b, f.from) && covers(a, f.to)))
        return true;
    for (const TriggerArc& t : model_.triggers)
      if ((covers(a, t.from) && covers(b, t.to)) || (covers(b, t.from) && covers(a, t.to)))
        return true;
    return false;
  }

  std::size_t component_count() const {
    const std::size_t n = members_.size();
    std::vector<bool> seen(n, false);
    std::size_t components = 0;
    for (std::size_t start = 0; start < n; ++start) {
      if (seen[start]) continue;
      ++components;
      std::vector<std::size_t> frontier{start};
      seen[start] = true;
      while (!frontier.empty()) {
        std::size_t cur = frontier.back();
        frontier.pop_back();
        for (std::size_t next = 0; next < n; ++next) {
          if (!seen[next] && adjacent(cur, next)) {
            seen[next] = true;
            frontier.push_back(next);
          }
        }
      }
    }
    return components;
  }

 private:
  std::pair<Endpoint, Endpoint> arc_endpoints(const RegionMember& m) const {
    if (m.kind == RegionMember::Kind::Flow) {
      const FlowArc& f = model_.flows.at(m.arc_index);
      return {f.from, f.to};
    }
    const TriggerArc& t = model_.triggers.at(m.arc_index);
    return {t.from, t.to};
  }

  bool covers(const RegionMember& m, const Endpoint& e) const {
    if (m.kind == RegionMember::Kind::Port)
      return m.machine == e.machine && m.port == e.port;
    if (m.kind == RegionMember::Kind::Machine)
      return m.machine == e.machine || model_.is_ancestor(m.machine, e.machine);
    return false;
  }

  const StaticModel& model_;
  const std::vector<RegionMember>& members_;
};

}  // namespace detail

// Region checks: every region non-empty and connected (errors), plus
// warnings for static elements no region covers.
inline ValidationReport validate_regions(const StaticModel& model,
                                         const std::vector<EventDef>& events) {
  ValidationReport report;
  for (const EventDef& e : events) {
    if (e.region.empty()) {
      report.push_back({Severity::Error, codes::region_empty, e.id, "event region is empty"});
      continue;
    }
    detail::RegionConnectivity conn(model, e.region);
    std::size_t components = conn.component_count();
    if (components > 1)
      report.push_back({Severity::Error, codes::region_disconnected, e.id,
                        "region falls apart into " + std::to_string(components) + " pieces"});
  }

  // Coverage: a machine member covers its own stages and storage; a port
  // member covers its port and machine; arcs cover their endpoints.
  std::set<MachineId> machines_covered;
  std::set<std::pair<MachineId, PortKind>> ports_covered;
  auto cover_endpoint = [&](const Endpoint& e) {
    machines_covered.insert(e.machine);
    ports_covered.insert({e.machine, e.port});
  };
  for (const EventDef& e : events) {
    for (const RegionMember& m : e.region) {
      switch (m.kind) {
        case RegionMember::Kind::Machine: {
          machines_covered.insert(m.machine);
          for (const Stage& s : model.at(m.machine).stages)
            ports_covered.insert({m.machine, s.kind});
          if (model.at(m.machine).has_storage())
            ports_covered.insert({m.machine, PortKind::Storage});
          break;
        }
        case RegionMember::Kind::Port:
          machines_covered.insert(m.machine);
          ports_covered.insert({m.machine, m.port});
          break;
        case RegionMember::Kind::Flow: {
          const FlowArc& f = model.flows.at(m.arc_index);
          cover_endpoint(f.from);
          cover_endpoint(f.to);
          break;
        }
        case RegionMember::Kind::Trigger: {
          const TriggerArc& t = model.triggers.at(m.arc_index);
          cover_endpoint(t.from);
          cover_endpoint(t.to);
          break;
        }
      }
    }
  }
  for (const Machine& m : model.machines) {
    if (!machines_covered.contains(m.id)) {
      report.push_back({Severity::Warning, codes::uncovered_element, model.name_path(m.id),
                        "machine lies in no event region"});
      continue;
    }
    std::set<PortKind> seen;
    for (const Stage& s : m.stages) {
      if (!seen.insert(s.kind).second) continue;
      if (!ports_covered.contains({m.id, s.kind}))
        report.push_back({Severity::Warning, codes::uncovered_element,
                          model.endpoint_path({m.id, s.kind}), "stage lies in no event region"});
    }
    if (m.has_storage() && !ports_covered.contains({m.id, PortKind::Storage}))
      report.push_back({Severity::Warning, codes::uncovered_element,
                        model.endpoint_path({m.id, PortKind::Storage}),
                        "storage lies in no event region"});
  }
  sort_report(report);
  return report;
}

// Verifies that every method path walks existing edges. Empty report means
// all method semantics hold in the graph.
inline ValidationReport check_method_paths(const BehaviorGraph& g) {
  ValidationReport report;
  for (const auto& [name, path] : g.methods) {
    for (const std::string& id : path)
      if (!g.events.contains(id))
        report.push_back({Severity::Error, codes::unknown_event, name, "unknown event " + id});
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      if (!g.has_edge(path[i], path[i + 1]))
        report.push_back({Severity::Error, codes::path_broken, name,
                          "no edge " + path[i] + " -> " + path[i + 1]});
    }
  }
  sort_report(report);
  return report;
}

// Assembles a graph from parts, checking method paths as a construction
// gate: broken paths throw with the aggregated findings.
inline BehaviorGraph build_behavior(std::vector<EventDef> events, std::vector<BehaviorEdge> edges,
                                    std::map<std::string, std::vector<std::string>> methods) {
  BehaviorGraph g;
  for (EventDef& e : events) {
    if (g.events.contains(e.id)) throw DuplicateEventId(e.id);
    std::string id = e.id;
    g.events.emplace(std::move(id), std::move(e));
  }
  for (const BehaviorEdge& e : edges) {
    if (!g.events.contains(e.from)) throw UnknownEvent(e.from);
    if (!g.events.contains(e.to)) throw UnknownEvent(e.to);
  }
  g.edges = std::move(edges);
  for (const auto& [name, path] : methods)
    for (const std::string& id : path)
      if (!g.events.contains(id)) throw UnknownEvent(id);
  g.methods = std::move(methods);
  if (ValidationReport findings = check_method_paths(g); !findings.empty())
    throw PathBroken(std::move(findings));
  return g;
}

// Seeded random walk over the behavior graph. The start event is drawn
// uniformly from `start`; each step draws uniformly among outgoing edges;
// the walk halts after max_steps transitions or at an event without
// successors. Identical arguments give identical traces (the generator is
// the portable mt19937 with modulo indexing, no distribution objects).
inline Trace simulate(const BehaviorGraph& g, const std::set<std::string>& start,
                      std::uint32_t seed, std::size_t max_steps) {
  if (start.empty()) throw EmptyStartSet();
  for (const std::string& id : start)
    if (!g.events.contains(id)) throw UnknownEvent(id);

  std::map<std::string, std::vector<std::string>> successors;
  {
    std::vector<BehaviorEdge> edges = g.edges;
    std::sort(edges.begin(), edges.end());
    for (const BehaviorEdge& e : edges) successors[e.from].push_back(e.to);
  }

  std::mt19937 rng(seed);
  auto pick = [&rng](const auto& xs) { return xs[rng() % xs.size()]; };

  Trace trace;
  trace.seed = seed;
  std::vector<std::string> starts(start.begin(), start.end());  // set iterates sorted
  std::string current = pick(starts);
  trace.steps.push_back(current);
  for (std::size_t i = 0; i < max_steps; ++i) {
    auto it = successors.find(current);
    if (it == successors.end() || it->second.empty()) break;
    current = pick(it->second);
    trace.steps.push_back(current);
  }
  return trace;
}

inline std::string format_trace(const Trace& t) {
  std::string out = "# seed=" + std::to_string(t.seed) + '\n';
  for (const std::string& id : t.steps) out += id + '\n';
  return out;
}

// Finds every start index where a method's event path occurs contiguously
// in the trace. Results are ordered by index, then method name.
inline std::vector<std::pair<std::string, std::size_t>> recognize_methods(const BehaviorGraph& g,
                                                                          const Trace& t) {
  std::vector<std::pair<std::string, std::size_t>> out;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    for (const auto& [name, path] : g.methods) {
      if (path.empty() || i + path.size() > t.steps.size()) continue;
      if (std::equal(path.begin(), path.end(), t.steps.begin() + static_cast<std::ptrdiff_t>(i)))
        out.emplace_back(name, i);
    }
  }
  return out;
}

}  // namespace tmuml
