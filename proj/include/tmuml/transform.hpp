#pragma once

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "tmuml/errors.hpp"
#include "tmuml/model.hpp"
#include "tmuml/scan.hpp"
#include "tmuml/tm_text.hpp"
#include "tmuml/uml.hpp"

namespace tmuml {

// Directives for merging class fragments into a use-case skeleton.
struct BindingMap {
  std::map<std::string, std::string> class_to_subject;    // class -> machine path in skeleton
  std::map<std::string, std::string> operation_bindings;  // operation -> declared method name
  std::set<std::string> decreate_ops;                     // operations forced to count as deletions

  friend bool operator==(const BindingMap&, const BindingMap&) = default;
};

// Binding file: `bind <Class> -> <Machine>` lines, optional `@decreate <op>`
// directives, optional `opbind <Op> -> <Method>` renames.
inline BindingMap parse_bindings(std::string_view text) {
  BindingMap bind;
  for (const auto& [line_no, line] : detail::content_lines(text)) {
    auto fields = detail::split_fields(line);
    const std::string& kw = fields[0];
    if (kw == "bind") {
      if (fields.size() != 4 || fields[2] != "->")
        throw ParseError(line_no, 1, "usage: bind <Class> -> <Machine>");
      if (!bind.class_to_subject.emplace(fields[1], fields[3]).second)
        throw ParseError(line_no, 1, "class bound twice: " + fields[1]);
    } else if (kw == "@decreate") {
      if (fields.size() != 2) throw ParseError(line_no, 1, "usage: @decreate <op>");
      bind.decreate_ops.insert(fields[1]);
    } else if (kw == "opbind") {
      if (fields.size() != 4 || fields[2] != "->")
        throw ParseError(line_no, 1, "usage: opbind <Op> -> <Method>");
      bind.operation_bindings[fields[1]] = fields[3];
    } else {
      throw ParseError(line_no, 1, "unknown directive: " + kw);
    }
  }
  return bind;
}

inline std::string serialize_bindings(const BindingMap& bind) {
  std::string out = "# bind\n";
  for (const auto& [cls, target] : bind.class_to_subject)
    out += "bind " + cls + " -> " + target + '\n';
  for (const auto& [op, method] : bind.operation_bindings)
    out += "opbind " + op + " -> " + method + '\n';
  for (const std::string& op : bind.decreate_ops) out += "@decreate " + op + '\n';
  return out;
}

namespace detail {

// The actor-to-subject interaction chain. Stages and flows are ensured
// idempotently so several associations of one actor share a single chain.
inline void ensure_interaction_chain(StaticModel& m, MachineId actor, MachineId subject) {
  m.ensure_stage(actor, PortKind::Create);
  m.ensure_stage(actor, PortKind::Release);
  m.ensure_stage(actor, PortKind::TransferOut);
  m.ensure_stage(subject, PortKind::TransferIn);
  m.ensure_stage(subject, PortKind::Receive);
  m.ensure_stage(subject, PortKind::Process);
  m.ensure_flow({actor, PortKind::Create}, {actor, PortKind::Release});
  m.ensure_flow({actor, PortKind::Release}, {actor, PortKind::TransferOut});
  m.ensure_flow({actor, PortKind::TransferOut}, {subject, PortKind::TransferIn});
  m.ensure_flow({subject, PortKind::TransferIn}, {subject, PortKind::Receive});
  m.ensure_flow({subject, PortKind::Receive}, {subject, PortKind::Process});
}

// Use-case machines start with create only; a process stage (reached from
// create) appears once the machine originates an include or extend trigger.
inline void ensure_process(StaticModel& m, MachineId machine) {
  m.ensure_stage(machine, PortKind::Process);
  m.ensure_flow({machine, PortKind::Create}, {machine, PortKind::Process});
}

}  // namespace detail

// Builds the TM internal-structure skeleton a use-case model implies:
//   R1 actors become root actor regions, the subject a root subject machine
//   R2 use cases become machines nested in the subject
//   R3 an association adds the actor interaction chain plus a trigger from
//      the subject's process to the use case's create (one trigger per
//      association, even when two actors activate the same machine)
//   R4 include adds an unconditional trigger base.process -> included.create
//   R5 extend adds a conditional trigger base.process -> extension.create
//   R6 use-case generalization nests specializations inside the general
//      machine as a shared region
//   R7 actor generalization nests the specific actor region in the general
// The output always passes validate_static.
inline StaticModel transform_usecase(const UseCaseModel& uc) {
  StaticModel out;
  MachineId subject = out.add_machine(uc.subject, Role::Subject);

  std::map<std::string, MachineId> actors;
  for (const std::string& a : uc.actors) actors[a] = out.add_machine(a, Role::ActorRegion);

  std::map<std::string, MachineId> usecases;
  for (const std::string& u : uc.usecases) {
    MachineId id = out.add_machine(u, Role::UsecaseMachine, subject);
    out.ensure_stage(id, PortKind::Create);
    usecases[u] = id;
  }

  for (const auto& [specific, general] : uc.usecase_generalizations)
    out.at(usecases.at(specific)).parent = usecases.at(general);
  for (const auto& [specific, general] : uc.actor_generalizations)
    out.at(actors.at(specific)).parent = actors.at(general);

  for (const auto& [actor, usecase] : uc.associations) {
    detail::ensure_interaction_chain(out, actors.at(actor), subject);
    out.add_trigger({subject, PortKind::Process}, {usecases.at(usecase), PortKind::Create});
  }
  for (const auto& [base, included] : uc.includes) {
    detail::ensure_process(out, usecases.at(base));
    out.add_trigger({usecases.at(base), PortKind::Process},
                    {usecases.at(included), PortKind::Create});
  }
  for (const ExtendRel& e : uc.extends) {
    detail::ensure_process(out, usecases.at(e.base));
    out.add_trigger({usecases.at(e.base), PortKind::Process},
                    {usecases.at(e.extension), PortKind::Create}, e.condition);
  }
  return out;
}

// Recasts a class model as TM fragments:
//   C1 a class becomes a class machine with a create stage
//   C2 each attribute becomes a nested attribute machine with create,
//      release, storage and the store/retrieve arcs
//   C3 a deletion operation (name starting with "delete", or listed in
//      `decreate_ops`) adds a nested lifecycle machine whose create is
//      flagged decreate
//   C4 every operation name is appended to declared_methods
inline StaticModel transform_class(const ClassModel& cm,
                                   const std::set<std::string>& decreate_ops = {}) {
  StaticModel out;
  auto is_deletion = [&](const std::string& op) {
    if (decreate_ops.contains(op)) return true;
    constexpr std::string_view prefix = "delete";
    if (op.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i)
      if (std::tolower(static_cast<unsigned char>(op[i])) != prefix[i]) return false;
    return true;
  };

  for (const UmlClass& c : cm.classes) {
    MachineId cls = out.add_machine(c.name, Role::ClassMachine);
    out.ensure_stage(cls, PortKind::Create);
    for (const UmlAttribute& a : c.attributes) {
      std::string name = a.name;
      name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
      for (MachineId sibling : out.children(cls))
        if (out.at(sibling).name == name) throw NameCollision(name);
      MachineId attr = out.add_machine(std::move(name), Role::AttributeMachine, cls);
      out.ensure_stage(attr, PortKind::Create);
      out.ensure_stage(attr, PortKind::Release);
      out.ensure_storage(attr);
      out.ensure_flow({attr, PortKind::Create}, {attr, PortKind::Storage});
      out.ensure_flow({attr, PortKind::Storage}, {attr, PortKind::Release});
    }
    bool deletion = false;
    for (const UmlOperation& op : c.operations) {
      deletion = deletion || is_deletion(op.name);
      out.declared_methods.push_back(op.name);
    }
    if (deletion) {
      for (MachineId sibling : out.children(cls))
        if (out.at(sibling).name == "Lifecycle") throw NameCollision("Lifecycle");
      MachineId lifecycle = out.add_machine("Lifecycle", Role::Generic, cls);
      out.ensure_stage(lifecycle, PortKind::Create, /*decreate=*/true);
    }
  }
  return out;
}

// Merges class fragments into the use-case skeleton: every bound class
// machine is re-parented under its target machine and the declared methods
// are concatenated (renamed through operation_bindings where given). Classes
// without a binding stay root machines.
inline StaticModel merge_models(const StaticModel& skeleton, const StaticModel& fragments,
                                const BindingMap& bind) {
  StaticModel out = skeleton;
  const MachineId offset = static_cast<MachineId>(out.machines.size());

  for (const Machine& m : fragments.machines) {
    Machine copy = m;
    copy.id = static_cast<MachineId>(copy.id + offset);
    if (copy.parent) copy.parent = static_cast<MachineId>(*copy.parent + offset);
    out.machines.push_back(std::move(copy));
  }
  auto remap = [offset](Endpoint e) {
    e.machine = static_cast<MachineId>(e.machine + offset);
    return e;
  };
  for (const FlowArc& f : fragments.flows)
    out.flows.push_back({remap(f.from), remap(f.to), f.label});
  for (const TriggerArc& t : fragments.triggers)
    out.triggers.push_back({remap(t.from), remap(t.to), t.condition});

  std::set<std::string> fragment_roots;
  for (MachineId root : fragments.roots()) {
    const std::string& name = fragments.at(root).name;
    fragment_roots.insert(name);
    auto it = bind.class_to_subject.find(name);
    if (it == bind.class_to_subject.end()) continue;
    auto targets = skeleton.resolve_suffix(detail::split_dotted(it->second));
    if (targets.empty()) throw UnknownBinding(it->second);
    if (targets.size() > 1) throw AmbiguousName(it->second);
    out.at(static_cast<MachineId>(root + offset)).parent = targets.front();
  }
  for (const auto& [cls, target] : bind.class_to_subject)
    if (!fragment_roots.contains(cls)) throw UnknownBinding(cls);

  // Re-parenting may have put same-named machines side by side.
  std::set<std::pair<std::string, std::string>> sibling_names;
  for (const Machine& m : out.machines) {
    std::string parent = m.parent ? out.name_path(*m.parent) : "";
    if (!sibling_names.emplace(parent, m.name).second) throw NameCollision(m.name);
  }

  for (const std::string& method : fragments.declared_methods) {
    auto it = bind.operation_bindings.find(method);
    out.declared_methods.push_back(it == bind.operation_bindings.end() ? method : it->second);
  }
  return out;
}

}  // namespace tmuml
