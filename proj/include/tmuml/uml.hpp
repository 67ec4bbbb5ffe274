#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tmuml/errors.hpp"
#include "tmuml/model.hpp"
#include "tmuml/scan.hpp"

namespace tmuml {

// ---------------------------------------------------------------- use cases

struct ExtendRel {
  std::string extension;
  std::string base;
  std::optional<std::string> condition;

  friend bool operator==(const ExtendRel&, const ExtendRel&) = default;
};

struct UseCaseModel {
  std::string subject;
  std::vector<std::string> actors;
  std::vector<std::string> usecases;
  std::vector<std::pair<std::string, std::string>> associations;  // (actor, usecase)
  std::vector<std::pair<std::string, std::string>> includes;      // (base, included)
  std::vector<ExtendRel> extends;
  std::vector<std::pair<std::string, std::string>> actor_generalizations;    // (specific, general)
  std::vector<std::pair<std::string, std::string>> usecase_generalizations;  // (specific, general)

  friend bool operator==(const UseCaseModel&, const UseCaseModel&) = default;
};

// ------------------------------------------------------------------ classes

struct UmlAttribute {
  std::string name;
  std::string type;  // may be empty

  friend bool operator==(const UmlAttribute&, const UmlAttribute&) = default;
};

struct UmlParameter {
  std::string name;
  std::string type;

  friend bool operator==(const UmlParameter&, const UmlParameter&) = default;
};

struct UmlOperation {
  std::string name;
  std::vector<UmlParameter> params;

  friend bool operator==(const UmlOperation&, const UmlOperation&) = default;
};

struct UmlClass {
  std::string name;
  std::vector<UmlAttribute> attributes;
  std::vector<UmlOperation> operations;

  friend bool operator==(const UmlClass&, const UmlClass&) = default;
};

struct ClassModel {
  std::vector<UmlClass> classes;

  friend bool operator==(const ClassModel&, const ClassModel&) = default;
};

namespace detail {

inline std::string checked_name(const std::string& s, std::uint32_t line) {
  if (!is_identifier(s)) throw ParseError(line, 1, "invalid name: " + s);
  if (reserved_name(s)) throw ParseError(line, 1, "reserved word used as name: " + s);
  return s;
}

inline std::string strip(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string_view::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return std::string(s.substr(a, b - a + 1));
}

// Walks specific -> general edges; throws on any cycle.
inline void check_acyclic(const std::vector<std::pair<std::string, std::string>>& edges) {
  std::map<std::string, std::vector<std::string>> next;
  for (const auto& [s, g] : edges) next[s].push_back(g);
  for (const auto& [start, _] : next) {
    std::set<std::string> seen{start};
    std::vector<std::string> frontier{start};
    while (!frontier.empty()) {
      std::string cur = std::move(frontier.back());
      frontier.pop_back();
      auto it = next.find(cur);
      if (it == next.end()) continue;
      for (const std::string& g : it->second) {
        if (g == start) throw CyclicGeneralization(start);
        if (seen.insert(g).second) frontier.push_back(g);
      }
    }
  }
}

}  // namespace detail

// Parses the line-oriented use-case format. Declarations may appear in any
// order relative to the relations that use them.
inline UseCaseModel parse_usecase(std::string_view text) {
  UseCaseModel uc;
  auto lines = detail::content_lines(text);

  bool have_subject = false;
  for (const auto& [line_no, line] : lines) {
    auto fields = detail::split_fields(line);
    const std::string& kw = fields[0];
    if (kw == "subject") {
      if (fields.size() != 2) throw ParseError(line_no, 1, "usage: subject <Name>");
      if (have_subject) throw ParseError(line_no, 1, "more than one subject");
      uc.subject = detail::checked_name(fields[1], line_no);
      have_subject = true;
    } else if (kw == "actor" || kw == "usecase") {
      if (fields.size() != 2)
        throw ParseError(line_no, 1, "usage: " + kw + " <Name>");
      std::string name = detail::checked_name(fields[1], line_no);
      auto& list = kw == "actor" ? uc.actors : uc.usecases;
      if (std::find(list.begin(), list.end(), name) != list.end())
        throw ParseError(line_no, 1, "duplicate " + kw + ": " + name);
      list.push_back(std::move(name));
    }
  }
  if (!have_subject) throw ParseError(1, 1, "missing subject declaration");
  for (const std::string& a : uc.actors)
    if (a == uc.subject) throw ParseError(1, 1, "actor shares the subject name: " + a);

  auto declared_actor = [&](const std::string& n) {
    return std::find(uc.actors.begin(), uc.actors.end(), n) != uc.actors.end();
  };
  auto declared_usecase = [&](const std::string& n) {
    return std::find(uc.usecases.begin(), uc.usecases.end(), n) != uc.usecases.end();
  };
  auto need_actor = [&](const std::string& n) {
    if (!declared_actor(n)) throw UndeclaredName(n);
    return n;
  };
  auto need_usecase = [&](const std::string& n) {
    if (!declared_usecase(n)) throw UndeclaredName(n);
    return n;
  };

  for (const auto& [line_no, line] : lines) {
    auto fields = detail::split_fields(line);
    const std::string& kw = fields[0];
    if (kw == "subject" || kw == "actor" || kw == "usecase") continue;
    if (kw == "assoc") {
      if (fields.size() != 4 || fields[2] != "--")
        throw ParseError(line_no, 1, "usage: assoc <Actor> -- <UseCase>");
      uc.associations.emplace_back(need_actor(fields[1]), need_usecase(fields[3]));
    } else if (kw == "include") {
      if (fields.size() != 4 || fields[2] != "includes")
        throw ParseError(line_no, 1, "usage: include <Base> includes <Included>");
      if (fields[1] == fields[3])
        throw ParseError(line_no, 1, "a use case cannot include itself");
      uc.includes.emplace_back(need_usecase(fields[1]), need_usecase(fields[3]));
    } else if (kw == "extend") {
      if (fields.size() < 4 || fields[2] != "extends")
        throw ParseError(line_no, 1, "usage: extend <Ext> extends <Base> [<condition>]");
      if (fields[1] == fields[3])
        throw ParseError(line_no, 1, "a use case cannot extend itself");
      ExtendRel rel{need_usecase(fields[1]), need_usecase(fields[3]), std::nullopt};
      // the condition is whatever follows the fourth field
      std::size_t pos = 0;
      for (int field = 0; field < 4 && pos != std::string::npos; ++field) {
        pos = line.find_first_not_of(" \t", pos);
        if (pos != std::string::npos) pos = line.find_first_of(" \t", pos);
      }
      std::string rest = pos == std::string::npos ? "" : detail::strip(line.substr(pos));
      if (!rest.empty()) {
        if (rest.front() != '[' || rest.back() != ']')
          throw ParseError(line_no, 1, "extend condition goes in [brackets]");
        rel.condition = detail::strip(rest.substr(1, rest.size() - 2));
      }
      uc.extends.push_back(std::move(rel));
    } else if (kw == "actorgen" || kw == "ucgen") {
      if (fields.size() != 4 || fields[2] != "->")
        throw ParseError(line_no, 1, "usage: " + kw + " <Specific> -> <General>");
      if (fields[1] == fields[3]) throw CyclicGeneralization(fields[1]);
      if (kw == "actorgen")
        uc.actor_generalizations.emplace_back(need_actor(fields[1]), need_actor(fields[3]));
      else
        uc.usecase_generalizations.emplace_back(need_usecase(fields[1]), need_usecase(fields[3]));
    } else {
      throw ParseError(line_no, 1, "unknown declaration: " + kw);
    }
  }

  detail::check_acyclic(uc.actor_generalizations);
  detail::check_acyclic(uc.usecase_generalizations);
  return uc;
}

// Parses the class format: `class <Name>` headers followed by `attr` and
// `op` lines. UML visibility marks and multiplicities are accepted and
// dropped.
inline ClassModel parse_class(std::string_view text) {
  ClassModel cm;
  UmlClass* current = nullptr;

  // UML visibility marks; '#' is unavailable since it starts a comment.
  auto strip_visibility = [](std::string s) {
    if (!s.empty() && (s[0] == '+' || s[0] == '-' || s[0] == '~')) s.erase(0, 1);
    return detail::strip(s);
  };
  auto strip_multiplicity = [](std::string s) {
    std::size_t b = s.rfind('[');
    if (b != std::string::npos && s.back() == ']') s = detail::strip(s.substr(0, b));
    return s;
  };

  for (const auto& [line_no, line] : detail::content_lines(text)) {
    auto fields = detail::split_fields(line);
    const std::string& kw = fields[0];
    if (kw == "class") {
      if (fields.size() != 2) throw ParseError(line_no, 1, "usage: class <Name>");
      std::string name = detail::checked_name(fields[1], line_no);
      for (const UmlClass& c : cm.classes)
        if (c.name == name) throw DuplicateName(name);
      cm.classes.push_back({name, {}, {}});
      current = &cm.classes.back();
    } else if (kw == "attr") {
      if (!current) throw ParseError(line_no, 1, "attr outside a class");
      std::string rest = strip_visibility(detail::strip(line.substr(4)));
      std::string name = rest, type;
      std::size_t colon = rest.find(':');
      if (colon != std::string::npos) {
        name = detail::strip(rest.substr(0, colon));
        type = strip_multiplicity(detail::strip(rest.substr(colon + 1)));
      } else {
        name = strip_multiplicity(name);
      }
      detail::checked_name(name, line_no);
      for (const UmlAttribute& a : current->attributes)
        if (a.name == name) throw DuplicateName(name);
      current->attributes.push_back({std::move(name), std::move(type)});
    } else if (kw == "op") {
      if (!current) throw ParseError(line_no, 1, "op outside a class");
      std::string rest = strip_visibility(detail::strip(line.substr(2)));
      std::size_t open = rest.find('(');
      if (open == std::string::npos || rest.back() != ')')
        throw ParseError(line_no, 1, "usage: op <name>(<params>)");
      std::string name = detail::strip(rest.substr(0, open));
      detail::checked_name(name, line_no);
      for (const UmlOperation& o : current->operations)
        if (o.name == name) throw DuplicateName(name);
      UmlOperation op{std::move(name), {}};
      std::string params = rest.substr(open + 1, rest.size() - open - 2);
      std::size_t start = 0;
      while (start <= params.size() && !detail::strip(params).empty()) {
        std::size_t comma = params.find(',', start);
        std::string item = detail::strip(
            params.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (item.empty()) throw ParseError(line_no, 1, "empty parameter");
        UmlParameter p;
        std::size_t colon = item.find(':');
        if (colon != std::string::npos) {
          p.name = detail::strip(item.substr(0, colon));
          p.type = detail::strip(item.substr(colon + 1));
        } else {
          p.name = item;
        }
        detail::checked_name(p.name, line_no);
        op.params.push_back(std::move(p));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      current->operations.push_back(std::move(op));
    } else {
      throw ParseError(line_no, 1, "unknown declaration: " + kw);
    }
  }
  return cm;
}

// Canonical text: declarations sorted, relations sorted; round-trips through
// the matching parser.
inline std::string serialize_uml(const UseCaseModel& uc) {
  std::string out = "# usecase\n";
  out += "subject " + uc.subject + '\n';
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  for (const std::string& a : sorted(uc.actors)) out += "actor " + a + '\n';
  for (const std::string& u : sorted(uc.usecases)) out += "usecase " + u + '\n';

  auto pairs = [&out](std::vector<std::pair<std::string, std::string>> v, const std::string& kw,
                      const char* sep) {
    std::sort(v.begin(), v.end());
    for (const auto& [x, y] : v) out += kw + ' ' + x + ' ' + sep + ' ' + y + '\n';
  };
  pairs(uc.associations, "assoc", "--");
  pairs(uc.includes, "include", "includes");

  std::vector<ExtendRel> exts = uc.extends;
  std::sort(exts.begin(), exts.end(), [](const ExtendRel& a, const ExtendRel& b) {
    return std::tie(a.extension, a.base, a.condition) < std::tie(b.extension, b.base, b.condition);
  });
  for (const ExtendRel& e : exts) {
    out += "extend " + e.extension + " extends " + e.base;
    if (e.condition) out += " [" + *e.condition + "]";
    out += '\n';
  }
  pairs(uc.actor_generalizations, "actorgen", "->");
  pairs(uc.usecase_generalizations, "ucgen", "->");
  return out;
}

inline std::string serialize_uml(const ClassModel& cm) {
  std::string out = "# class\n";
  std::vector<UmlClass> classes = cm.classes;
  std::sort(classes.begin(), classes.end(),
            [](const UmlClass& a, const UmlClass& b) { return a.name < b.name; });
  for (UmlClass& c : classes) {
    out += "class " + c.name + '\n';
    std::sort(c.attributes.begin(), c.attributes.end(),
              [](const UmlAttribute& a, const UmlAttribute& b) { return a.name < b.name; });
    std::sort(c.operations.begin(), c.operations.end(),
              [](const UmlOperation& a, const UmlOperation& b) { return a.name < b.name; });
    for (const UmlAttribute& a : c.attributes) {
      out += "  attr " + a.name;
      if (!a.type.empty()) out += " : " + a.type;
      out += '\n';
    }
    for (const UmlOperation& o : c.operations) {
      out += "  op " + o.name + '(';
      for (std::size_t i = 0; i < o.params.size(); ++i) {
        if (i) out += ", ";
        out += o.params[i].name;
        if (!o.params[i].type.empty()) out += " : " + o.params[i].type;
      }
      out += ")\n";
    }
  }
  return out;
}

}  // namespace tmuml
