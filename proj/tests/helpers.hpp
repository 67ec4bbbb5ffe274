#pragma once

// Shared test utilities: corpus access, a small independent DOT syntax
// checker, a brute-force region connectivity oracle, and random model
// generators for the round-trip and validation properties.

#include <cstdint>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tmuml/tmuml.hpp"

namespace testutil {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus(const std::string& name) {
  return std::string(TMUML_CORPUS_DIR) + "/" + name;
}

// ------------------------------------------------------------ DOT checking
//
// Line-level scan of the emitted DOT text: braces must balance, and every
// edge endpoint must have been declared as a node (or proxy node) earlier.
// Deliberately independent of the emitter's data structures.

struct DotStats {
  bool valid = false;
  int clusters = 0;
  int edges = 0;
  int dashed_edges = 0;
};

inline DotStats check_dot(const std::string& text) {
  DotStats stats;
  int depth = 0;
  std::set<std::string> declared;
  std::istringstream in(text);
  std::string line;
  bool first = true;

  auto quoted_at = [](const std::string& s, std::size_t pos, std::string& out) {
    if (pos >= s.size() || s[pos] != '"') return false;
    out.clear();
    for (std::size_t i = pos + 1; i < s.size(); ++i) {
      if (s[i] == '\\') {
        ++i;
        if (i < s.size()) out += s[i];
        continue;
      }
      if (s[i] == '"') return true;
      out += s[i];
    }
    return false;
  };

  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(' ');
    if (start == std::string::npos) continue;
    std::string body = line.substr(start);
    if (first) {
      if (body.rfind("digraph", 0) != 0 || body.back() != '{') return stats;
      ++depth;
      first = false;
      continue;
    }
    if (body.rfind("subgraph", 0) == 0) {
      if (body.back() != '{') return stats;
      if (body.find("\"cluster_") != std::string::npos) ++stats.clusters;
      ++depth;
      continue;
    }
    if (body == "}") {
      --depth;
      if (depth < 0) return stats;
      continue;
    }
    if (body[0] == '"') {
      std::string id;
      if (!quoted_at(body, 0, id)) return stats;
      std::size_t after = body.find('"', 1);
      after = body.find_first_not_of(' ', after + 1);
      if (after != std::string::npos && body.compare(after, 2, "->") == 0) {
        std::size_t target = body.find('"', after);
        std::string to;
        if (!quoted_at(body, target, to)) return stats;
        if (!declared.count(id) || !declared.count(to)) return stats;
        ++stats.edges;
        if (body.find("style=dashed") != std::string::npos) ++stats.dashed_edges;
      } else {
        declared.insert(id);
      }
    }
    // attribute lines (rankdir, label, node defaults) need no checking
  }
  stats.valid = depth == 0 && !first;
  return stats;
}

// ---------------------------------------------- region connectivity oracle
//
// Re-derives member adjacency from first principles and computes the
// component count by transitive closure (Warshall), independent of the
// library's BFS.

inline bool oracle_ancestor_or_self(const tmuml::StaticModel& m, tmuml::MachineId anc,
                                    tmuml::MachineId id) {
  for (std::optional<tmuml::MachineId> cur = id; cur;) {
    if (*cur == anc) return true;
    cur = m.at(*cur).parent;
  }
  return false;
}

inline std::size_t oracle_region_components(const tmuml::StaticModel& model,
                                            const std::vector<tmuml::RegionMember>& members) {
  using tmuml::RegionMember;
  const std::size_t n = members.size();

  auto endpoints_of = [&](const RegionMember& m,
                          std::vector<tmuml::Endpoint>& out) {
    if (m.kind == RegionMember::Kind::Flow) {
      out.push_back(model.flows.at(m.arc_index).from);
      out.push_back(model.flows.at(m.arc_index).to);
    } else if (m.kind == RegionMember::Kind::Trigger) {
      out.push_back(model.triggers.at(m.arc_index).from);
      out.push_back(model.triggers.at(m.arc_index).to);
    }
  };
  auto covers = [&](const RegionMember& m, const tmuml::Endpoint& e) {
    if (m.kind == RegionMember::Kind::Port) return m.machine == e.machine && m.port == e.port;
    if (m.kind == RegionMember::Kind::Machine)
      return oracle_ancestor_or_self(model, m.machine, e.machine);
    return false;
  };
  auto touch = [&](const RegionMember& a, const RegionMember& b) {
    bool a_arc =
        a.kind == RegionMember::Kind::Flow || a.kind == RegionMember::Kind::Trigger;
    bool b_arc =
        b.kind == RegionMember::Kind::Flow || b.kind == RegionMember::Kind::Trigger;
    std::vector<tmuml::Endpoint> ea, eb;
    endpoints_of(a, ea);
    endpoints_of(b, eb);
    if (a_arc && b_arc) {
      for (const auto& x : ea)
        for (const auto& y : eb)
          if (x == y) return true;
      return false;
    }
    if (a_arc) return covers(b, ea[0]) || covers(b, ea[1]);
    if (b_arc) return covers(a, eb[0]) || covers(a, eb[1]);
    if (oracle_ancestor_or_self(model, a.machine, b.machine) ||
        oracle_ancestor_or_self(model, b.machine, a.machine))
      return true;
    for (const tmuml::FlowArc& f : model.flows)
      if ((covers(a, f.from) && covers(b, f.to)) || (covers(b, f.from) && covers(a, f.to)))
        return true;
    for (const tmuml::TriggerArc& t : model.triggers)
      if ((covers(a, t.from) && covers(b, t.to)) || (covers(b, t.from) && covers(a, t.to)))
        return true;
    return false;
  };

  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) reach[i][j] = i == j || touch(members[i], members[j]);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;

  std::size_t components = 0;
  std::vector<bool> counted(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (counted[i]) continue;
    ++components;
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j]) counted[j] = true;
  }
  return components;
}

// ------------------------------------------------------- random generators

class Gen {
 public:
  explicit Gen(std::uint32_t seed) : rng_(seed) {}

  std::mt19937& rng() { return rng_; }

  std::size_t below(std::size_t n) { return n == 0 ? 0 : rng_() % n; }

  bool chance(int percent) { return static_cast<int>(rng_() % 100) < percent; }

  std::string name(std::size_t i) {
    static const char* pool[] = {"Alpha", "Bravo", "Carol", "Delta", "Echo",  "Fox",
                                 "Golf",  "Hotel", "India", "Jolt",  "Kilo",  "Lima",
                                 "Mike",  "Nova",  "Oscar", "Papa",  "Quebec", "Romeo"};
    return pool[i % std::size(pool)] + (i < std::size(pool) ? "" : std::to_string(i));
  }

  // A valid random static model: forest with unique sibling names, arcs
  // drawn only from the legal adjacency table.
  tmuml::StaticModel static_model() {
    using namespace tmuml;
    StaticModel m;
    std::size_t count = 1 + below(6);
    for (std::size_t i = 0; i < count; ++i) {
      std::optional<MachineId> parent;
      if (i > 0 && chance(50)) parent = static_cast<MachineId>(below(m.machines.size()));
      Role roles[] = {Role::Generic, Role::ActorRegion, Role::Subject, Role::UsecaseMachine,
                      Role::ClassMachine, Role::AttributeMachine};
      MachineId id = m.add_machine(name(i), roles[below(std::size(roles))], parent);
      PortKind all[] = {PortKind::Create,     PortKind::Process,    PortKind::Release,
                        PortKind::Receive,    PortKind::TransferIn, PortKind::TransferOut};
      for (PortKind kind : all)
        if (chance(55)) m.ensure_stage(id, kind, kind == PortKind::Create && chance(15));
      if (chance(40)) m.ensure_storage(id);
    }
    // intra-machine flows along the legal table
    struct Pair {
      tmuml::PortKind from, to;
    };
    static constexpr Pair intra[] = {
        {PortKind::TransferIn, PortKind::Receive}, {PortKind::Receive, PortKind::Process},
        {PortKind::Receive, PortKind::Release},    {PortKind::Create, PortKind::Process},
        {PortKind::Create, PortKind::Release},     {PortKind::Process, PortKind::Release},
        {PortKind::Release, PortKind::TransferOut}};
    for (const Machine& mc : m.machines) {
      for (const Pair& p : intra)
        if (mc.has_stage(p.from) && mc.has_stage(p.to) && chance(60))
          m.ensure_flow({mc.id, p.from}, {mc.id, p.to});
      if (mc.has_storage()) {
        PortKind stores[] = {PortKind::Create, PortKind::Process, PortKind::Receive,
                             PortKind::Release};
        for (PortKind s : stores)
          if (mc.has_stage(s) && chance(40)) m.ensure_flow({mc.id, s}, {mc.id, PortKind::Storage});
        PortKind retrieves[] = {PortKind::Process, PortKind::Release};
        for (PortKind r : retrieves)
          if (mc.has_stage(r) && chance(40)) m.ensure_flow({mc.id, PortKind::Storage}, {mc.id, r});
      }
    }
    for (const Machine& a : m.machines)
      for (const Machine& b : m.machines)
        if (a.id != b.id && a.has_stage(PortKind::TransferOut) &&
            b.has_stage(PortKind::TransferIn) && chance(35))
          m.ensure_flow({a.id, PortKind::TransferOut}, {b.id, PortKind::TransferIn});
    for (const Machine& a : m.machines) {
      for (const Machine& b : m.machines) {
        if (!chance(20)) continue;
        PortKind from = PortKind::Create;
        bool has_from = false;
        for (const Stage& s : a.stages) {
          from = s.kind;
          has_from = true;
          if (chance(50)) break;
        }
        if (!has_from) continue;
        PortKind targets[] = {PortKind::Create, PortKind::Process};
        PortKind to = targets[below(2)];
        if (b.has_stage(to)) {
          m.add_trigger({a.id, from}, {b.id, to},
                        chance(30) ? std::optional<std::string>("cond") : std::nullopt);
        }
      }
    }
    if (chance(50)) m.declared_methods.push_back("DoThing");
    return m;
  }

  tmuml::UseCaseModel usecase_model() {
    tmuml::UseCaseModel uc;
    uc.subject = "Subject";
    std::size_t n_actors = 1 + below(3);
    std::size_t n_usecases = 1 + below(5);
    for (std::size_t i = 0; i < n_actors; ++i) uc.actors.push_back("Actor" + std::to_string(i));
    for (std::size_t i = 0; i < n_usecases; ++i) uc.usecases.push_back("Task" + std::to_string(i));
    std::size_t n_assoc = below(2 * n_usecases + 1);
    for (std::size_t i = 0; i < n_assoc; ++i)
      uc.associations.emplace_back(uc.actors[below(n_actors)], uc.usecases[below(n_usecases)]);
    for (std::size_t i = 0; i < n_usecases; ++i) {
      for (std::size_t j = 0; j < n_usecases; ++j) {
        if (i == j) continue;
        if (chance(12)) uc.includes.emplace_back(uc.usecases[i], uc.usecases[j]);
        if (chance(8))
          uc.extends.push_back({uc.usecases[i], uc.usecases[j],
                                chance(50) ? std::optional<std::string>("cond " + std::to_string(i))
                                           : std::nullopt});
      }
      // generalizations only point at lower indices: acyclic by construction
      if (i > 0 && chance(20))
        uc.usecase_generalizations.emplace_back(uc.usecases[i], uc.usecases[below(i)]);
    }
    for (std::size_t i = 1; i < n_actors; ++i)
      if (chance(20)) uc.actor_generalizations.emplace_back(uc.actors[i], uc.actors[below(i)]);
    return uc;
  }

  tmuml::ClassModel class_model() {
    tmuml::ClassModel cm;
    std::size_t n = 1 + below(3);
    for (std::size_t i = 0; i < n; ++i) {
      tmuml::UmlClass c;
      c.name = "Kind" + std::to_string(i);
      std::size_t n_attrs = below(4);
      for (std::size_t j = 0; j < n_attrs; ++j)
        c.attributes.push_back({"field" + std::to_string(j), chance(70) ? "Integer" : ""});
      std::size_t n_ops = below(4);
      for (std::size_t j = 0; j < n_ops; ++j) {
        tmuml::UmlOperation op;
        op.name = (chance(25) ? "delete" : "do") + std::string("Op") + std::to_string(j);
        if (chance(40)) op.params.push_back({"x", chance(50) ? "Integer" : ""});
        c.operations.push_back(std::move(op));
      }
      cm.classes.push_back(std::move(c));
    }
    return cm;
  }

  // Random but resolvable events over a model: regions anchored on machines
  // (optionally with one of their ports), edges between declared events,
  // methods as short edge walks.
  std::pair<std::vector<tmuml::EventDef>, tmuml::BehaviorGraph> events(
      const tmuml::StaticModel& model) {
    using namespace tmuml;
    std::vector<EventDef> events;
    std::size_t count = 1 + below(6);
    for (std::size_t i = 0; i < count; ++i) {
      EventDef e;
      e.id = "E" + std::to_string(i);
      e.description = "event " + std::to_string(i);
      MachineId anchor = static_cast<MachineId>(below(model.machines.size()));
      e.region.push_back({RegionMember::Kind::Machine, anchor, PortKind::Create, 0});
      for (const Stage& s : model.at(anchor).stages)
        if (chance(40)) e.region.push_back({RegionMember::Kind::Port, anchor, s.kind, 0});
      if (!model.flows.empty() && chance(25)) {
        std::size_t idx = below(model.flows.size());
        e.region.push_back({RegionMember::Kind::Flow, 0, PortKind::Create, idx});
      }
      events.push_back(std::move(e));
    }
    std::vector<BehaviorEdge> edges;
    std::size_t n_edges = below(2 * count);
    for (std::size_t i = 0; i < n_edges; ++i)
      edges.push_back({events[below(count)].id, events[below(count)].id,
                       chance(30) ? EdgeKind::Trigger : EdgeKind::Sequence});
    std::map<std::string, std::vector<std::string>> methods;
    if (!edges.empty() && chance(80)) {
      const BehaviorEdge& e = edges[below(edges.size())];
      methods["Walk"] = {e.from, e.to};
    }
    BehaviorGraph g;
    for (const EventDef& e : events) g.events.emplace(e.id, e);
    g.edges = edges;
    g.methods = methods;
    return {std::move(events), std::move(g)};
  }

 private:
  std::mt19937 rng_;
};

}  // namespace testutil
