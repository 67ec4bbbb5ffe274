#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "tmuml/errors.hpp"
#include "tmuml/model.hpp"
#include "tmuml/scan.hpp"

namespace tmuml {

namespace detail {

struct PendingArc {
  bool is_trigger = false;
  std::vector<std::string> from_path;
  PortKind from_port = PortKind::Create;
  bool from_incomplete = false;
  std::vector<std::string> to_path;
  PortKind to_port = PortKind::Create;
  bool to_incomplete = false;
  std::optional<std::string> text;  // label or condition
  std::uint32_t line = 0;
  std::uint32_t column = 0;
};

// Splits a dotted reference into machine path segments plus a trailing port.
// "System.Invoice.ID.create" -> ({System, Invoice, ID}, Create).
struct SplitRef {
  std::vector<std::string> path;
  PortKind port = PortKind::Create;
  bool incomplete_transfer = false;  // ended in bare "transfer"
};

inline SplitRef split_port_ref(const Token& tok) {
  SplitRef out;
  auto segs = split_dotted(tok.text);
  for (const std::string& s : segs)
    if (s.empty()) throw ParseError(tok.line, tok.column, "empty path segment");
  if (segs.size() >= 3 && segs[segs.size() - 2] == "transfer" &&
      (segs.back() == "in" || segs.back() == "out")) {
    out.port = segs.back() == "in" ? PortKind::TransferIn : PortKind::TransferOut;
    segs.resize(segs.size() - 2);
  } else if (segs.size() >= 2 && segs.back() == "transfer") {
    out.incomplete_transfer = true;
    segs.pop_back();
  } else if (segs.size() >= 2) {
    auto port = parse_port_name(segs.back());
    if (!port) throw ParseError(tok.line, tok.column,
                                "reference must end in a stage or storage: " + tok.text);
    out.port = *port;
    segs.pop_back();
  } else {
    throw ParseError(tok.line, tok.column, "reference needs a machine: " + tok.text);
  }
  out.path = std::move(segs);
  return out;
}

// Resolves a machine path suffix or throws. Unknown machines carry the
// offending name; ambiguity is a parse-level problem.
inline MachineId resolve_machine(const StaticModel& model, const std::vector<std::string>& path,
                                 std::uint32_t line, std::uint32_t column) {
  auto matches = model.resolve_suffix(path);
  if (matches.empty()) throw UnknownReference(join_path(path));
  if (matches.size() > 1)
    throw ParseError(line, column, "ambiguous machine reference: " + join_path(path));
  return matches.front();
}

}  // namespace detail

// Parses the TM text format into a StaticModel. Machine references in arcs
// are resolved after the whole file is read, so arcs may appear anywhere.
// A referenced stage missing from its (declared) machine is left for
// validate_static to report.
inline StaticModel parse_tm(std::string_view text) {
  using detail::Token;
  detail::Scanner scan(text);
  StaticModel model;
  std::vector<detail::PendingArc> pending;

  auto expect_word = [&](const char* what) {
    Token t = scan.take();
    if (t.kind != Token::Kind::Word)
      throw ParseError(t.line, t.column, std::string("expected ") + what);
    return t;
  };

  auto machine_name = [&](const Token& t) {
    if (t.text.find('.') != std::string::npos)
      throw ParseError(t.line, t.column, "machine names may not contain '.'");
    if (!detail::is_identifier(t.text))
      throw ParseError(t.line, t.column, "invalid machine name: " + t.text);
    if (detail::reserved_name(t.text))
      throw ParseError(t.line, t.column, "reserved word used as name: " + t.text);
    return t.text;
  };

  auto parse_arc_side = [&](detail::PendingArc& arc, bool from) {
    Token t = expect_word("a stage reference");
    auto ref = detail::split_port_ref(t);
    if (from) {
      arc.from_path = std::move(ref.path);
      arc.from_port = ref.port;
      arc.from_incomplete = ref.incomplete_transfer;
      arc.line = t.line;
      arc.column = t.column;
    } else {
      arc.to_path = std::move(ref.path);
      arc.to_port = ref.port;
      arc.to_incomplete = ref.incomplete_transfer;
    }
  };

  // Machine bodies may nest; parse recursively.
  auto parse_machine = [&](auto&& self, std::optional<MachineId> parent) -> void {
    Token name_tok = expect_word("a machine name");
    std::string name = machine_name(name_tok);
    for (const Machine& m : model.machines) {
      if (m.parent == parent && m.name == name)
        throw ParseError(name_tok.line, name_tok.column, "duplicate machine name: " + name);
    }
    Role role = Role::Generic;
    if (scan.peek_token().kind == Token::Kind::Word && scan.peek_token().text == "role") {
      scan.take();
      Token role_tok = expect_word("a role");
      auto parsed = parse_role_name(role_tok.text);
      if (!parsed) throw ParseError(role_tok.line, role_tok.column, "unknown role: " + role_tok.text);
      role = *parsed;
    }
    Token brace = scan.take();
    if (brace.kind != Token::Kind::LBrace)
      throw ParseError(brace.line, brace.column, "expected '{'");
    MachineId id = model.add_machine(std::move(name), role, parent);
    for (;;) {
      Token t = scan.take();
      if (t.kind == Token::Kind::RBrace) break;
      if (t.kind != Token::Kind::Word)
        throw ParseError(t.line, t.column, "expected a machine body item or '}'");
      if (t.text == "machine") {
        self(self, id);
      } else if (t.text == "storage") {
        ++model.at(id).storage_count;
      } else if (t.text == "stage") {
        Token kind_tok = expect_word("a stage kind");
        auto port = parse_port_name(kind_tok.text);
        if (!port || *port == PortKind::Storage) {
          if (kind_tok.text == "transfer")
            throw ParseError(kind_tok.line, kind_tok.column,
                             "transfer requires a direction (.in or .out)");
          throw ParseError(kind_tok.line, kind_tok.column, "unknown stage kind: " + kind_tok.text);
        }
        bool decreate = false;
        if (scan.peek_token().kind == Token::Kind::Word && scan.peek_token().text == "decreate") {
          Token d = scan.take();
          if (*port != PortKind::Create)
            throw ParseError(d.line, d.column, "decreate applies only to create");
          decreate = true;
        }
        model.at(id).stages.push_back({*port, decreate});
      } else {
        throw ParseError(t.line, t.column, "unexpected '" + t.text + "' in machine body");
      }
    }
  };

  for (;;) {
    Token t = scan.take();
    if (t.kind == Token::Kind::End) break;
    if (t.kind != Token::Kind::Word)
      throw ParseError(t.line, t.column, "expected a top-level declaration");
    if (t.text == "machine") {
      parse_machine(parse_machine, std::nullopt);
    } else if (t.text == "flow" || t.text == "trigger") {
      detail::PendingArc arc;
      arc.is_trigger = t.text == "trigger";
      parse_arc_side(arc, true);
      Token arrow = scan.take();
      if (arrow.kind != Token::Kind::Arrow)
        throw ParseError(arrow.line, arrow.column, "expected '->'");
      parse_arc_side(arc, false);
      const char* attr = arc.is_trigger ? "when" : "label";
      if (scan.peek_token().kind == Token::Kind::Word && scan.peek_token().text == attr) {
        scan.take();
        Token s = scan.take();
        if (s.kind != Token::Kind::String)
          throw ParseError(s.line, s.column, std::string("expected a quoted string after ") + attr);
        arc.text = s.text;
      }
      pending.push_back(std::move(arc));
    } else if (t.text == "method") {
      Token name_tok = expect_word("a method name");
      if (!detail::is_identifier(name_tok.text))
        throw ParseError(name_tok.line, name_tok.column, "invalid method name: " + name_tok.text);
      model.declared_methods.push_back(name_tok.text);
    } else {
      throw ParseError(t.line, t.column, "unknown declaration: " + t.text);
    }
  }

  for (detail::PendingArc& arc : pending) {
    // Machines resolve first, so an undeclared name is reported as such even
    // when the port is also malformed.
    Endpoint from{detail::resolve_machine(model, arc.from_path, arc.line, arc.column),
                  arc.from_port};
    Endpoint to{detail::resolve_machine(model, arc.to_path, arc.line, arc.column), arc.to_port};
    if (arc.from_incomplete || arc.to_incomplete)
      throw ParseError(arc.line, arc.column, "transfer requires a direction (.in or .out)");
    if (arc.is_trigger)
      model.triggers.push_back({from, to, std::move(arc.text)});
    else
      model.flows.push_back({from, to, std::move(arc.text)});
  }
  return model;
}

namespace detail {

inline void print_machine(const StaticModel& model, MachineId id, int depth, std::string& out) {
  const Machine& m = model.at(id);
  std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  out += indent;
  out += "machine ";
  out += m.name;
  if (m.role != Role::Generic) {
    out += " role ";
    out += role_name(m.role);
  }
  out += " {\n";
  // Stages in canonical kind order; duplicates (invalid models) kept.
  static constexpr PortKind order[] = {PortKind::Create,   PortKind::Process,
                                       PortKind::Release,  PortKind::Receive,
                                       PortKind::TransferIn, PortKind::TransferOut};
  for (PortKind kind : order) {
    for (const Stage& s : m.stages) {
      if (s.kind != kind) continue;
      out += indent;
      out += "  stage ";
      out += port_name(s.kind);
      if (s.decreate) out += " decreate";
      out += '\n';
    }
  }
  for (int i = 0; i < m.storage_count; ++i) {
    out += indent;
    out += "  storage\n";
  }
  for (MachineId child : model.children_by_name(id)) print_machine(model, child, depth + 1, out);
  out += indent;
  out += "}\n";
}

}  // namespace detail

// Canonical text form: machines sorted by name (recursively), arcs sorted by
// endpoint paths, methods sorted. Printing the same model twice is
// byte-identical, and parse_tm(print_tm(m)) is structurally equal to m.
inline std::string print_tm(const StaticModel& model) {
  std::string out = "# tm\n";
  for (MachineId root : model.roots_by_name()) detail::print_machine(model, root, 0, out);

  auto arc_key = [&](const Endpoint& from, const Endpoint& to,
                     const std::optional<std::string>& text) {
    return std::tuple<std::string, std::string, std::string>(
        model.endpoint_path(from), model.endpoint_path(to), text.value_or(""));
  };

  std::vector<FlowArc> flows = model.flows;
  std::stable_sort(flows.begin(), flows.end(), [&](const FlowArc& a, const FlowArc& b) {
    return arc_key(a.from, a.to, a.label) < arc_key(b.from, b.to, b.label);
  });
  for (const FlowArc& f : flows) {
    out += "flow " + model.endpoint_path(f.from) + " -> " + model.endpoint_path(f.to);
    if (f.label) out += " label " + detail::quote(*f.label);
    out += '\n';
  }

  std::vector<TriggerArc> triggers = model.triggers;
  std::stable_sort(triggers.begin(), triggers.end(), [&](const TriggerArc& a, const TriggerArc& b) {
    return arc_key(a.from, a.to, a.condition) < arc_key(b.from, b.to, b.condition);
  });
  for (const TriggerArc& t : triggers) {
    out += "trigger " + model.endpoint_path(t.from) + " -> " + model.endpoint_path(t.to);
    if (t.condition) out += " when " + detail::quote(*t.condition);
    out += '\n';
  }

  std::vector<std::string> methods = model.declared_methods;
  std::sort(methods.begin(), methods.end());
  for (const std::string& m : methods) out += "method " + m + '\n';
  return out;
}

}  // namespace tmuml
