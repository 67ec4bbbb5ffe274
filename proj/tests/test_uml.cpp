#include "doctest.h"
#include "helpers.hpp"
#include "tmuml/tmuml.hpp"

using namespace tmuml;

TEST_SUITE_BEGIN("uml");

TEST_CASE("minimal use-case file") {
  UseCaseModel uc = parse_usecase("subject S\nactor A\nusecase U\nassoc A -- U\n");
  CHECK(uc.subject == "S");
  CHECK(uc.actors.size() == 1);
  CHECK(uc.usecases.size() == 1);
  REQUIRE(uc.associations.size() == 1);
  CHECK(uc.associations[0] == std::pair<std::string, std::string>("A", "U"));
}

TEST_CASE("banking corpus relations") {
  UseCaseModel uc = parse_usecase(testutil::slurp(testutil::corpus("banking.usecase")));
  CHECK(std::find(uc.includes.begin(), uc.includes.end(),
                  std::pair<std::string, std::string>("Login", "VerifyPassword")) !=
        uc.includes.end());
  bool has_extend = false;
  for (const ExtendRel& e : uc.extends)
    if (e.extension == "Error" && e.base == "VerifyPassword") {
      has_extend = true;
      CHECK(e.condition == "invalid password");
    }
  CHECK(has_extend);
}

TEST_CASE("relations may precede declarations") {
  UseCaseModel uc = parse_usecase("assoc A -- U\nsubject S\nactor A\nusecase U\n");
  CHECK(uc.associations.size() == 1);
}

TEST_CASE("self-include is rejected") {
  CHECK_THROWS_AS(parse_usecase("subject S\nusecase U\ninclude U includes U\n"), ParseError);
}

TEST_CASE("undeclared names in relations") {
  CHECK_THROWS_WITH_AS(parse_usecase("subject S\nactor A\nassoc A -- Ghost\n"),
                       "undeclared name: Ghost", UndeclaredName);
}

TEST_CASE("generalization cycles are rejected") {
  CHECK_THROWS_AS(parse_usecase("subject S\nusecase A\nusecase B\nucgen A -> B\nucgen B -> A\n"),
                  CyclicGeneralization);
  CHECK_THROWS_AS(parse_usecase("subject S\nactor A\nactorgen A -> A\n"), CyclicGeneralization);
  // three-step cycle
  CHECK_THROWS_AS(parse_usecase("subject S\nusecase A\nusecase B\nusecase C\n"
                                "ucgen A -> B\nucgen B -> C\nucgen C -> A\n"),
                  CyclicGeneralization);
}

TEST_CASE("inserting a 2-cycle into any generated model errors") {
  for (std::uint32_t seed = 0; seed < 25; ++seed) {
    testutil::Gen gen(seed);
    UseCaseModel uc = gen.usecase_model();
    if (uc.usecases.size() < 2) continue;
    std::string text = serialize_uml(uc);
    text += "ucgen " + uc.usecases[0] + " -> " + uc.usecases[1] + "\n";
    text += "ucgen " + uc.usecases[1] + " -> " + uc.usecases[0] + "\n";
    CHECK_THROWS_AS(parse_usecase(text), CyclicGeneralization);
  }
}

TEST_CASE("subject-only model serializes to the header plus one line") {
  UseCaseModel uc = parse_usecase("subject Solo\n");
  CHECK(serialize_uml(uc) == "# usecase\nsubject Solo\n");
}

TEST_CASE("use-case serialization round-trips and is stable") {
  std::string text = testutil::slurp(testutil::corpus("banking.usecase"));
  UseCaseModel uc = parse_usecase(text);
  std::string canon = serialize_uml(uc);
  UseCaseModel again = parse_usecase(canon);
  CHECK(serialize_uml(again) == canon);
  CHECK(serialize_uml(uc) == canon);
}

TEST_CASE("invoice class corpus") {
  ClassModel cm = parse_class(testutil::slurp(testutil::corpus("invoice.class")));
  REQUIRE(cm.classes.size() == 1);
  const UmlClass& c = cm.classes[0];
  CHECK(c.name == "Invoice");
  REQUIRE(c.attributes.size() == 2);
  CHECK(c.attributes[0].name == "ID");
  CHECK(c.attributes[1].name == "Approval");
  std::set<std::string> ops;
  for (const UmlOperation& o : c.operations) ops.insert(o.name);
  CHECK(ops == std::set<std::string>{"Createinvoice", "Updateinvoice", "Sendinvoice",
                                     "Printinvoice", "Registerinvoice", "Deleteinvoice"});
}

TEST_CASE("lowercase attribute names parse fine") {
  ClassModel cm = parse_class("class Invoice\n  attr id : Integer\n  attr approvalStatus : Boolean\n");
  CHECK(cm.classes[0].attributes[0].name == "id");
  CHECK(cm.classes[0].attributes[1].name == "approvalStatus");
}

TEST_CASE("a class may be empty") {
  ClassModel cm = parse_class("class Nothing\n");
  CHECK(cm.classes[0].attributes.empty());
  CHECK(cm.classes[0].operations.empty());
}

TEST_CASE("duplicate attribute names are rejected") {
  CHECK_THROWS_WITH_AS(parse_class("class C\n  attr id : A\n  attr id : B\n"),
                       "duplicate name: id", DuplicateName);
  CHECK_THROWS_AS(parse_class("class C\nclass C\n"), DuplicateName);
  CHECK_THROWS_AS(parse_class("class C\n  op f()\n  op f()\n"), DuplicateName);
}

TEST_CASE("visibility marks and multiplicities are accepted and dropped") {
  ClassModel cm = parse_class("class C\n  attr + id : Integer [0..1]\n  attr -note\n"
                              "  op ~run(x : Int, y)\n");
  CHECK(cm.classes[0].attributes[0].name == "id");
  CHECK(cm.classes[0].attributes[0].type == "Integer");
  CHECK(cm.classes[0].attributes[1].name == "note");
  REQUIRE(cm.classes[0].operations.size() == 1);
  CHECK(cm.classes[0].operations[0].name == "run");
  REQUIRE(cm.classes[0].operations[0].params.size() == 2);
  CHECK(cm.classes[0].operations[0].params[0].type == "Int");
  CHECK(cm.classes[0].operations[0].params[1].name == "y");
}

TEST_CASE("class serialization round-trips") {
  ClassModel cm = parse_class(testutil::slurp(testutil::corpus("invoice.class")));
  std::string canon = serialize_uml(cm);
  CHECK(serialize_uml(parse_class(canon)) == canon);
}

TEST_CASE("round-trip property over generated models") {
  for (std::uint32_t seed = 0; seed < 100; ++seed) {
    testutil::Gen gen(seed);
    CAPTURE(seed);
    std::string uc_canon = serialize_uml(gen.usecase_model());
    CHECK(serialize_uml(parse_usecase(uc_canon)) == uc_canon);
    std::string cm_canon = serialize_uml(gen.class_model());
    CHECK(serialize_uml(parse_class(cm_canon)) == cm_canon);
  }
}

TEST_CASE("fuzz: arbitrary bytes either parse or raise a typed error") {
  std::mt19937 rng(99);
  const char alphabet[] = "abcXYZ019 \t\n\"#:{}[]().,->;__";
  for (int iter = 0; iter < 300; ++iter) {
    std::string text;
    std::size_t len = rng() % 120;
    for (std::size_t i = 0; i < len; ++i)
      text += alphabet[rng() % (sizeof(alphabet) - 1)];
    CAPTURE(iter);
    try {
      parse_usecase(text);
    } catch (const Error&) {
    }
    try {
      parse_class(text);
    } catch (const Error&) {
    }
    try {
      parse_tm(text);
    } catch (const Error&) {
    }
  }
  CHECK(true);  // reaching here means no crash and no foreign exception
}

TEST_SUITE_END();
