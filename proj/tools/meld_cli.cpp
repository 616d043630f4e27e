// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: script runner, one-shot expression commands, and
// the benchmark harness.  Exit codes: 0 ok, 1 usage, 2 parse/validation,
// 3 resource limit.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "meld/bench.hpp"
#include "meld/canon.hpp"
#include "meld/meld.hpp"
#include "meld/parser.hpp"
#include "meld/printer.hpp"
#include "meld/script.hpp"

namespace {

constexpr int kSchemaVersion = 1;

struct Common {
  std::string format = "text";
  bool stats = false;
  unsigned threads = 0;  // 0: hardware parallelism
  std::size_t max_rows = 10'000'000;
  bool no_optimizations = false;
};

meld::MeldOptions meld_options(const Common& c) {
  meld::MeldOptions o;
  o.max_rows = c.max_rows;
  o.optimize = !c.no_optimizations;
  o.threads = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw meld::Error(meld::ErrorCode::bad_script, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void print_stats(const meld::MeldStats& st) {
  std::cerr << "stats: terms_in=" << st.terms_in << " terms_out=" << st.terms_out
            << " groups=" << st.groups << " basis_k=" << st.basis_members
            << " distinct_rows=" << st.distinct_rows
            << " max_projection_rows=" << st.max_projection_rows
            << " total_projection_rows=" << st.total_projection_rows
            << " projection_ns=" << st.projection_ns << " solve_ns=" << st.solve_ns << "\n";
}

int run_script_cmd(const Common& common, const std::string& path) {
  const std::string src = read_file(path);
  meld::Session session;
  session.opts = meld_options(common);
  std::vector<meld::SessionOutput> outputs = session.run(src);
  print_warnings(session.warnings);
  if (common.format == "json") {
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "run";
    doc["outputs"] = nlohmann::json::array();
    for (const auto& o : outputs)
      doc["outputs"].push_back({{"name", o.name}, {"line", o.line}, {"text", o.text}});
    doc["warnings"] = session.warnings;
    std::cout << doc.dump(2) << "\n";
  } else {
    for (const auto& o : outputs) std::cout << o.text << "\n";
  }
  if (common.stats) print_stats(session.stats);
  return 0;
}

// simplify / canonicalise / project share the one-shot expression shape
int expression_cmd(const Common& common, const std::string& verb, const std::string& expr_src,
                   const std::string& decl_path) {
  meld::Session session;
  session.opts = meld_options(common);
  std::string decl_src;
  if (!decl_path.empty()) {
    decl_src = read_file(decl_path);
    session.run(decl_src);
  }
  meld::Parser parser(expr_src, session.tab, &session.env);
  meld::Expression e = parser.parse_expression_only();

  meld::MeldStats st;
  meld::Expression result;
  if (verb == "simplify") {
    std::set<std::string> undeclared;
    for (const auto& m : e.terms)
      for (const auto& f : m.factors)
        if (!session.tab.find(f.head) && undeclared.insert(f.head).second)
          session.warnings.push_back("no symmetry declared for '" + f.head +
                                     "'; factor passes through unprojected");
    result = meld::meld(e, session.tab, session.opts, &st);
  } else if (verb == "canonicalise") {
    result = meld::canonicalise(e, session.tab);
  } else {
    result = meld::young_project(e, session.tab, session.opts);
  }

  print_warnings(session.warnings);
  const std::string text = meld::print_expression(result, session.tab);
  if (common.format == "json") {
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = verb;
    doc["input"] = expr_src;
    doc["result"] = text;
    doc["terms"] = result.terms.size();
    doc["warnings"] = session.warnings;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << text << "\n";
  }
  if (common.stats && verb == "simplify") print_stats(st);
  return 0;
}

int bench_cmd(const Common& common, meld::BenchSpec spec, const std::string& csv_path) {
  spec.opts = meld_options(common);
  std::vector<meld::BenchRow> rows = meld::run_bench(spec);
  const std::string csv = meld::bench_csv(rows);
  if (csv_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw meld::Error(meld::ErrorCode::bad_script, "cannot write '" + csv_path + "'");
    out << csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tensor expression melding"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "meld 0.1.0");

  Common common;
  app.add_option("--format", common.format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--stats", common.stats, "print meld statistics to stderr");
  app.add_option("--threads", common.threads, "projection pool size (0: hardware)");
  app.add_option("--max-rows", common.max_rows, "projection row cap");
  app.add_flag("--no-optimizations", common.no_optimizations, "disable projection-plan rules");

  std::string script_path;
  CLI::App* run = app.add_subcommand("run", "execute a script file");
  run->add_option("file", script_path, "script path")->required();

  std::string expr_src, decl_path;
  CLI::App* simplify = app.add_subcommand("simplify", "meld one expression");
  simplify->add_option("-e,--expr", expr_src, "expression")->required();
  simplify->add_option("--decl", decl_path, "declaration script applied first");

  CLI::App* canon = app.add_subcommand("canonicalise", "canonicalise one expression");
  canon->add_option("-e,--expr", expr_src, "expression")->required();
  canon->add_option("--decl", decl_path, "declaration script applied first");

  CLI::App* project = app.add_subcommand("project", "expand the projection of one expression");
  project->add_option("-e,--expr", expr_src, "expression")->required();
  project->add_option("--decl", decl_path, "declaration script applied first");

  meld::BenchSpec spec;
  std::string csv_path;
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark family, emit CSV");
  bench->add_option("--family", spec.family, "sweep family")
      ->required()
      ->check(CLI::IsMember({"terms-sweep", "shape-sweep", "dummy-fraction-sweep",
                             "polynomial-order-sweep"}));
  bench->add_option("--lo", spec.lo, "range start (0: family default)");
  bench->add_option("--hi", spec.hi, "range end (0: family default)");
  bench->add_option("--reps", spec.reps, "repetitions per case");
  bench->add_option("--seed", spec.seed, "generator seed");
  bench->add_option("--csv", csv_path, "write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    std::cout << e.what() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (run->parsed()) return run_script_cmd(common, script_path);
    if (simplify->parsed()) return expression_cmd(common, "simplify", expr_src, decl_path);
    if (canon->parsed()) return expression_cmd(common, "canonicalise", expr_src, decl_path);
    if (project->parsed()) return expression_cmd(common, "project", expr_src, decl_path);
    if (bench->parsed()) return bench_cmd(common, spec, csv_path);
  } catch (const meld::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return meld::is_resource_error(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
