// tmuml: command-line front end for the TM modeling toolchain.
//
// Subcommands mirror the pipeline stages: parse (canonical echo),
// transform (UML-subset inputs -> TM static model), validate, events,
// behavior, simulate, render, and pipeline (everything, with all
// intermediates written to a directory).
//
// Exit codes: 0 success, 1 error-severity findings, 2 parse/input error,
// 3 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "tmuml/tmuml.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_findings = 1;
constexpr int exit_parse = 2;
constexpr int exit_usage = 3;

struct InputError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{path + ": cannot open file"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError{path + ": cannot write file"};
  out << content;
}

bool use_color() {
  return isatty(fileno(stderr)) && std::getenv("NO_COLOR") == nullptr;
}

void print_error(const std::string& message) {
  if (use_color())
    std::cerr << "\033[31merror:\033[0m " << message << '\n';
  else
    std::cerr << "error: " << message << '\n';
}

// Runs a stage and maps thrown input problems onto the exit-code contract.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const tmuml::ParseError& e) {
    print_error(e.what());
    return exit_parse;
  } catch (const InputError& e) {
    print_error(e.message);
    return exit_parse;
  } catch (const tmuml::Error& e) {
    print_error(e.what());
    return exit_parse;
  }
}

struct Loaded {
  tmuml::StaticModel model;
  std::vector<tmuml::EventDef> events;
  tmuml::BehaviorGraph graph;
};

Loaded load_model_and_events(const std::string& model_path, const std::string& events_path) {
  Loaded out;
  try {
    out.model = tmuml::parse_tm(read_file(model_path));
  } catch (const tmuml::ParseError& e) {
    throw InputError{model_path + ":" + e.what()};
  }
  try {
    auto [events, graph] = tmuml::parse_events(read_file(events_path), out.model);
    out.events = std::move(events);
    out.graph = std::move(graph);
  } catch (const tmuml::ParseError& e) {
    throw InputError{events_path + ":" + e.what()};
  }
  return out;
}

int report_exit(const tmuml::ValidationReport& report) {
  std::cout << tmuml::render_report(report);
  return tmuml::has_errors(report) ? exit_findings : exit_ok;
}

std::set<std::string> default_start(const tmuml::BehaviorGraph& graph) {
  std::set<std::string> start;
  for (const auto& [id, e] : graph.events) start.insert(id);
  for (const tmuml::BehaviorEdge& e : graph.edges) start.erase(e.to);
  return start;
}

tmuml::StaticModel run_transform(const std::string& usecase_path, const std::string& class_path,
                                 const std::string& bind_path) {
  tmuml::BindingMap bind;
  if (!bind_path.empty()) bind = tmuml::parse_bindings(read_file(bind_path));
  auto skeleton = tmuml::transform_usecase(tmuml::parse_usecase(read_file(usecase_path)));
  auto fragments = tmuml::transform_class(tmuml::parse_class(read_file(class_path)),
                                          bind.decreate_ops);
  return tmuml::merge_models(skeleton, fragments, bind);
}

void emit_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file(out_path, content);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TM modeling toolchain: build, check and render a singular "
               "thinging-machine model from UML-subset use-case and class files"};
  app.require_subcommand(1);

  // parse
  std::string parse_file, parse_kind, parse_model;
  auto* cmd_parse = app.add_subcommand("parse", "parse one input file and echo its canonical form");
  cmd_parse->add_option("file", parse_file, "input file")->required();
  cmd_parse->add_option("--kind", parse_kind,
                        "tm|usecase|class|events|bind (default: by extension)")
      ->check(CLI::IsMember({"tm", "usecase", "class", "events", "bind"}));
  cmd_parse->add_option("--model", parse_model, "static model, required for events files");

  // transform
  std::string tr_usecase, tr_class, tr_bind, tr_out;
  auto* cmd_transform =
      app.add_subcommand("transform", "use-case + class (+ bindings) -> merged TM model");
  cmd_transform->add_option("--usecase", tr_usecase, "use-case file")->required();
  cmd_transform->add_option("--class", tr_class, "class file")->required();
  cmd_transform->add_option("--bind", tr_bind, "binding file");
  cmd_transform->add_option("-o,--out", tr_out, "output file (default: stdout)");

  // validate
  std::string val_file;
  auto* cmd_validate = app.add_subcommand("validate", "check a TM file against the well-formedness rules");
  cmd_validate->add_option("file", val_file, "TM file")->required();

  // events
  std::string ev_model, ev_events;
  auto* cmd_events = app.add_subcommand("events", "check event regions against a static model");
  cmd_events->add_option("--model", ev_model, "TM file")->required();
  cmd_events->add_option("--events", ev_events, "events file")->required();

  // behavior
  std::string bh_model, bh_events;
  auto* cmd_behavior = app.add_subcommand("behavior", "check method paths in the behavior graph");
  cmd_behavior->add_option("--model", bh_model, "TM file")->required();
  cmd_behavior->add_option("--events", bh_events, "events file")->required();

  // simulate
  std::string sim_model, sim_events, sim_start, sim_out;
  std::uint32_t sim_seed = 0;
  std::size_t sim_steps = 100;
  auto* cmd_simulate = app.add_subcommand("simulate", "run a seeded trace over the behavior graph");
  cmd_simulate->add_option("--model", sim_model, "TM file")->required();
  cmd_simulate->add_option("--events", sim_events, "events file")->required();
  cmd_simulate->add_option("--seed", sim_seed, "random seed");
  cmd_simulate->add_option("--steps", sim_steps, "maximum transitions");
  cmd_simulate->add_option("--start", sim_start,
                           "comma-separated start events (default: events without predecessors)");
  cmd_simulate->add_option("-o,--out", sim_out, "output file (default: stdout)");

  // render
  std::string rn_model, rn_events, rn_view = "static", rn_out;
  bool rn_no_storage = false, rn_no_conditions = false;
  auto* cmd_render = app.add_subcommand("render", "emit a DOT diagram");
  cmd_render->add_option("--model", rn_model, "TM file")->required();
  cmd_render->add_option("--events", rn_events, "events file (events and behavior views)");
  cmd_render->add_option("--view", rn_view, "static|events|behavior")
      ->check(CLI::IsMember({"static", "events", "behavior"}));
  cmd_render->add_flag("--no-storage", rn_no_storage, "hide storage nodes");
  cmd_render->add_flag("--no-conditions", rn_no_conditions, "hide trigger condition labels");
  cmd_render->add_option("-o,--out", rn_out, "output file (default: stdout)");

  // pipeline
  std::string pl_usecase, pl_class, pl_bind, pl_events, pl_out;
  std::uint32_t pl_seed = 0;
  std::size_t pl_steps = 100;
  auto* cmd_pipeline =
      app.add_subcommand("pipeline", "run every stage and write all artifacts to a directory");
  cmd_pipeline->add_option("--usecase", pl_usecase, "use-case file")->required();
  cmd_pipeline->add_option("--class", pl_class, "class file")->required();
  cmd_pipeline->add_option("--bind", pl_bind, "binding file");
  cmd_pipeline->add_option("--events", pl_events, "events file")->required();
  cmd_pipeline->add_option("--out", pl_out, "output directory")->required();
  cmd_pipeline->add_option("--seed", pl_seed, "random seed");
  cmd_pipeline->add_option("--steps", pl_steps, "maximum transitions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_usage;
  }

  if (cmd_parse->parsed()) {
    return guarded([&] {
      std::string kind = parse_kind;
      if (kind.empty()) {
        auto dot = parse_file.rfind('.');
        kind = dot == std::string::npos ? "" : parse_file.substr(dot + 1);
      }
      std::string text = read_file(parse_file);
      try {
        if (kind == "tm") {
          std::cout << tmuml::print_tm(tmuml::parse_tm(text));
        } else if (kind == "usecase") {
          std::cout << tmuml::serialize_uml(tmuml::parse_usecase(text));
        } else if (kind == "class") {
          std::cout << tmuml::serialize_uml(tmuml::parse_class(text));
        } else if (kind == "bind") {
          std::cout << tmuml::serialize_bindings(tmuml::parse_bindings(text));
        } else if (kind == "events") {
          if (parse_model.empty())
            throw InputError{"events files need --model <tm-file>"};
          auto model = tmuml::parse_tm(read_file(parse_model));
          auto [events, graph] = tmuml::parse_events(text, model);
          std::cout << tmuml::print_events(events, graph, model);
        } else {
          print_error("cannot tell the input kind; pass --kind");
          return exit_usage;
        }
      } catch (const tmuml::ParseError& e) {
        throw InputError{parse_file + ":" + e.what()};
      }
      return exit_ok;
    });
  }

  if (cmd_transform->parsed()) {
    return guarded([&] {
      auto merged = run_transform(tr_usecase, tr_class, tr_bind);
      auto report = tmuml::validate_static(merged);
      emit_output(tr_out, tmuml::print_tm(merged));
      if (tmuml::has_errors(report)) {
        std::cout << tmuml::render_report(report);
        return exit_findings;
      }
      return exit_ok;
    });
  }

  if (cmd_validate->parsed()) {
    return guarded([&] {
      tmuml::StaticModel model;
      try {
        model = tmuml::parse_tm(read_file(val_file));
      } catch (const tmuml::ParseError& e) {
        throw InputError{val_file + ":" + e.what()};
      }
      return report_exit(tmuml::validate_static(model));
    });
  }

  if (cmd_events->parsed()) {
    return guarded([&] {
      auto loaded = load_model_and_events(ev_model, ev_events);
      return report_exit(tmuml::validate_regions(loaded.model, loaded.events));
    });
  }

  if (cmd_behavior->parsed()) {
    return guarded([&] {
      auto loaded = load_model_and_events(bh_model, bh_events);
      return report_exit(tmuml::check_method_paths(loaded.graph));
    });
  }

  if (cmd_simulate->parsed()) {
    return guarded([&] {
      auto loaded = load_model_and_events(sim_model, sim_events);
      std::set<std::string> start;
      if (sim_start.empty()) {
        start = default_start(loaded.graph);
      } else {
        std::stringstream ss(sim_start);
        std::string id;
        while (std::getline(ss, id, ',')) start.insert(id);
      }
      auto trace = tmuml::simulate(loaded.graph, start, sim_seed, sim_steps);
      emit_output(sim_out, tmuml::format_trace(trace));
      return exit_ok;
    });
  }

  if (cmd_render->parsed()) {
    return guarded([&] {
      tmuml::RenderView view;
      view.show_storage = !rn_no_storage;
      view.condition_labels = !rn_no_conditions;
      if (rn_view == "static") {
        view.view = tmuml::RenderView::Level::Static;
        tmuml::StaticModel model;
        try {
          model = tmuml::parse_tm(read_file(rn_model));
        } catch (const tmuml::ParseError& e) {
          throw InputError{rn_model + ":" + e.what()};
        }
        emit_output(rn_out, tmuml::emit_dot(model, nullptr, nullptr, view));
        return exit_ok;
      }
      if (rn_events.empty()) throw InputError{"this view needs --events"};
      auto loaded = load_model_and_events(rn_model, rn_events);
      view.view = rn_view == "events" ? tmuml::RenderView::Level::Events
                                      : tmuml::RenderView::Level::Behavior;
      emit_output(rn_out, tmuml::emit_dot(loaded.model, &loaded.events, &loaded.graph, view));
      return exit_ok;
    });
  }

  if (cmd_pipeline->parsed()) {
    return guarded([&] {
      namespace fs = std::filesystem;
      fs::create_directories(pl_out);
      auto path = [&](const char* name) { return (fs::path(pl_out) / name).string(); };

      auto merged = run_transform(pl_usecase, pl_class, pl_bind);
      write_file(path("model.tm"), tmuml::print_tm(merged));
      auto validation = tmuml::validate_static(merged);
      write_file(path("validation.txt"), tmuml::render_report(validation));
      std::cout << tmuml::render_report(validation);

      std::vector<tmuml::EventDef> events;
      tmuml::BehaviorGraph graph;
      try {
        std::tie(events, graph) = tmuml::parse_events(read_file(pl_events), merged);
      } catch (const tmuml::ParseError& e) {
        throw InputError{pl_events + ":" + e.what()};
      }
      auto regions = tmuml::validate_regions(merged, events);
      write_file(path("regions.txt"), tmuml::render_report(regions));
      std::cout << tmuml::render_report(regions);
      auto behavior = tmuml::check_method_paths(graph);
      write_file(path("behavior.txt"), tmuml::render_report(behavior));
      std::cout << tmuml::render_report(behavior);

      auto trace = tmuml::simulate(graph, default_start(graph), pl_seed, pl_steps);
      write_file(path("trace.txt"), tmuml::format_trace(trace));

      tmuml::RenderView view;
      view.view = tmuml::RenderView::Level::Static;
      write_file(path("static.dot"), tmuml::emit_dot(merged, nullptr, nullptr, view));
      view.view = tmuml::RenderView::Level::Events;
      write_file(path("events.dot"), tmuml::emit_dot(merged, &events, &graph, view));
      view.view = tmuml::RenderView::Level::Behavior;
      write_file(path("behavior.dot"), tmuml::emit_dot(merged, &events, &graph, view));

      bool bad = tmuml::has_errors(validation) || tmuml::has_errors(regions) ||
                 tmuml::has_errors(behavior);
      return bad ? exit_findings : exit_ok;
    });
  }

  return exit_usage;
}
