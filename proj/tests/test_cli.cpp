#include "doctest.h"
#include "helpers.hpp"
#include "tmuml/tmuml.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = -1;
  std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(TMUML_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, n);
  int rc = pclose(pipe);
  result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return result;
}

std::string corpus(const std::string& name) { return testutil::corpus(name); }

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "tmuml_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string write_scratch(const std::string& name, const std::string& content) {
  fs::path p = scratch_dir() / name;
  std::ofstream out(p);
  out << content;
  return p.string();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("validate: clean file exits 0") {
  RunResult r = run("validate " + corpus("invoice.golden.tm"));
  CHECK(r.status == 0);
  CHECK(r.output.empty());
}

TEST_CASE("validate: bad flow exits 1 and names FLOW_ADJ") {
  std::string bad = write_scratch("bad_flow.tm",
                                  "machine A { stage process }\n"
                                  "machine B { stage process }\n"
                                  "flow A.process -> B.process\n");
  RunResult r = run("validate " + bad);
  CHECK(r.status == 1);
  CHECK(r.output.find("FLOW_ADJ") != std::string::npos);
}

TEST_CASE("parse errors exit 2 with file, line and column") {
  std::string broken = write_scratch("broken.tm", "machine A {\n  stage wrong\n}\n");
  RunResult r = run("validate " + broken);
  CHECK(r.status == 2);
  CHECK(r.output.find("broken.tm:2:") != std::string::npos);
}

TEST_CASE("usage errors exit 3") {
  CHECK(run("no-such-command").status == 3);
  CHECK(run("validate").status == 3);
  CHECK(run("render --model x.tm --view sideways").status == 3);
}

TEST_CASE("missing input files exit 2") {
  CHECK(run("validate /no/such/file.tm").status == 2);
}

TEST_CASE("parse echoes each format canonically") {
  RunResult tm = run("parse " + corpus("invoice.golden.tm"));
  CHECK(tm.status == 0);
  CHECK(tm.output.rfind("# tm\n", 0) == 0);
  RunResult uc = run("parse " + corpus("banking.usecase"));
  CHECK(uc.status == 0);
  CHECK(uc.output.rfind("# usecase\n", 0) == 0);
  RunResult cls = run("parse " + corpus("invoice.class"));
  CHECK(cls.status == 0);
  CHECK(cls.output.rfind("# class\n", 0) == 0);
  RunResult ev = run("parse " + corpus("invoice.events") + " --model " + corpus("invoice.golden.tm"));
  CHECK(ev.status == 0);
  CHECK(ev.output.rfind("# events\n", 0) == 0);
  RunResult bind = run("parse " + corpus("invoice.bind"));
  CHECK(bind.status == 0);
  CHECK(bind.output == "# bind\nbind Invoice -> System\n");
}

TEST_CASE("transform reproduces the golden model") {
  RunResult r = run("transform --usecase " + corpus("invoice.usecase") + " --class " +
                    corpus("invoice.class") + " --bind " + corpus("invoice.bind"));
  REQUIRE(r.status == 0);
  tmuml::StaticModel got = tmuml::parse_tm(r.output);
  tmuml::StaticModel golden = tmuml::parse_tm(testutil::slurp(corpus("invoice.golden.tm")));
  CHECK(tmuml::structural_diff(golden, got).empty());
}

TEST_CASE("events and behavior reports") {
  RunResult ev = run("events --model " + corpus("invoice.golden.tm") + " --events " +
                     corpus("invoice.events"));
  CHECK(ev.status == 0);  // warnings only
  RunResult bh = run("behavior --model " + corpus("invoice.golden.tm") + " --events " +
                     corpus("invoice.events"));
  CHECK(bh.status == 0);
  CHECK(bh.output.empty());

  std::string broken = write_scratch("broken.events",
                                     "event E1 \"a\" = { Operator }\n"
                                     "event E2 \"b\" = { Customer }\n"
                                     "method Jump = E1 -> E2\n");
  RunResult bad = run("behavior --model " + corpus("invoice.golden.tm") + " --events " + broken);
  CHECK(bad.status == 1);
  CHECK(bad.output.find("PATH_BROKEN") != std::string::npos);
}

TEST_CASE("simulate is reproducible for a fixed seed") {
  std::string args = "simulate --model " + corpus("invoice.golden.tm") + " --events " +
                     corpus("invoice.events") + " --seed 7 --steps 50";
  RunResult a = run(args);
  RunResult b = run(args);
  REQUIRE(a.status == 0);
  CHECK(a.output == b.output);
  CHECK(a.output.rfind("# seed=7\n", 0) == 0);
  RunResult c = run("simulate --model " + corpus("invoice.golden.tm") + " --events " +
                    corpus("invoice.events") + " --seed 8 --steps 50 --start E_O");
  REQUIRE(c.status == 0);
  CHECK(c.output.find("E_O") != std::string::npos);
}

TEST_CASE("render emits the requested view") {
  RunResult st = run("render --model " + corpus("invoice.golden.tm") + " --view static");
  REQUIRE(st.status == 0);
  CHECK(testutil::check_dot(st.output).valid);
  RunResult bh = run("render --model " + corpus("invoice.golden.tm") + " --events " +
                     corpus("invoice.events") + " --view behavior");
  REQUIRE(bh.status == 0);
  CHECK(testutil::check_dot(bh.output).valid);
  CHECK(run("render --model " + corpus("invoice.golden.tm") + " --view events").status == 2);
}

TEST_CASE("pipeline writes every artifact and is byte-reproducible") {
  fs::path out1 = scratch_dir() / "pipe1";
  fs::path out2 = scratch_dir() / "pipe2";
  fs::remove_all(out1);
  fs::remove_all(out2);
  std::string base = "pipeline --usecase " + corpus("invoice.usecase") + " --class " +
                     corpus("invoice.class") + " --bind " + corpus("invoice.bind") +
                     " --events " + corpus("invoice.events") + " --seed 7 --steps 100 --out ";
  RunResult a = run(base + out1.string());
  RunResult b = run(base + out2.string());
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);

  const char* artifacts[] = {"model.tm",  "validation.txt", "regions.txt", "behavior.txt",
                             "trace.txt", "static.dot",     "events.dot",  "behavior.dot"};
  for (const char* name : artifacts) {
    CAPTURE(name);
    REQUIRE(fs::exists(out1 / name));
    CHECK(testutil::slurp((out1 / name).string()) == testutil::slurp((out2 / name).string()));
  }

  tmuml::StaticModel emitted = tmuml::parse_tm(testutil::slurp((out1 / "model.tm").string()));
  tmuml::StaticModel golden = tmuml::parse_tm(testutil::slurp(corpus("invoice.golden.tm")));
  CHECK(tmuml::structural_diff(golden, emitted).empty());
}

TEST_SUITE_END();
