#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace tmuml {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text. Line and column are 1-based.
struct ParseError : Error {
  ParseError(std::uint32_t line, std::uint32_t column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line(line),
        column(column) {}

  std::uint32_t line;
  std::uint32_t column;
};

// A reference that does not resolve to any declared element.
struct UnknownReference : Error {
  explicit UnknownReference(std::string name)
      : Error("unknown reference: " + name), name(std::move(name)) {}

  std::string name;
};

// A relation names something the containing model never declares.
struct UndeclaredName : Error {
  explicit UndeclaredName(std::string name)
      : Error("undeclared name: " + name), name(std::move(name)) {}

  std::string name;
};

// Generalization relations form a cycle.
struct CyclicGeneralization : Error {
  explicit CyclicGeneralization(std::string name)
      : Error("cyclic generalization involving: " + name), name(std::move(name)) {}

  std::string name;
};

struct DuplicateName : Error {
  explicit DuplicateName(std::string name)
      : Error("duplicate name: " + name), name(std::move(name)) {}

  std::string name;
};

// Two sibling machines share a name, so name-based matching is undefined.
struct AmbiguousName : Error {
  explicit AmbiguousName(std::string name)
      : Error("ambiguous name: " + name), name(std::move(name)) {}

  std::string name;
};

struct UnknownBinding : Error {
  explicit UnknownBinding(std::string name)
      : Error("unknown binding: " + name), name(std::move(name)) {}

  std::string name;
};

struct NameCollision : Error {
  explicit NameCollision(std::string name)
      : Error("name collision: " + name), name(std::move(name)) {}

  std::string name;
};

struct DuplicateEventId : Error {
  explicit DuplicateEventId(std::string id)
      : Error("duplicate event id: " + id), id(std::move(id)) {}

  std::string id;
};

struct UnknownEvent : Error {
  explicit UnknownEvent(std::string id)
      : Error("unknown event: " + id), id(std::move(id)) {}

  std::string id;
};

struct EmptyStartSet : Error {
  EmptyStartSet() : Error("simulation start set is empty") {}
};

// A render view was requested without the inputs it needs.
struct MissingInput : Error {
  explicit MissingInput(std::string what)
      : Error("missing input: " + what), what_input(std::move(what)) {}

  std::string what_input;
};

}  // namespace tmuml
