#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "workspace.hpp"

namespace {

using liftlab::cli::json;

constexpr int kPass = 0, kFailed = 1, kInvalid = 2;

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<liftlab::cli::Workspace> load(const std::string& path) {
  auto text = slurp(path);
  if (!text) {
    std::cerr << path << ": cannot read\n";
    return std::nullopt;
  }
  auto res = liftlab::cli::parse_workspace(*text);
  for (const auto& e : res.errors) std::cerr << path << ":" << e << "\n";
  return res.workspace;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"liftlab: uniform lifting structures in finite presheaf categories"};
  app.require_subcommand(1);

  std::string file;
  auto* validate = app.add_subcommand("validate", "Parse and validate a workspace");
  validate->add_option("file", file, "Workspace document")->required();

  liftlab::cli::RunOptions opts;
  std::string out_path;
  auto* run = app.add_subcommand("run", "Run every task of a workspace and print the report");
  run->add_option("file", file, "Workspace document")->required();
  run->add_option("--budget", opts.budget, "Candidate budget per enumeration");
  run->add_option("--bound", opts.bound, "Element bound for parameter universes")->check(CLI::NonNegativeNumber);
  run->add_flag("--parallel", opts.parallel, "Run tasks concurrently");
  run->add_option("--out", out_path, "Write the report here instead of standard output");

  std::string task;
  std::string explain_file;
  auto* explain = app.add_subcommand("explain", "Describe the construction behind a task kind or task id");
  explain->add_option("task", task, "Task kind, or a task id together with --file")->required();
  explain->add_option("--file", explain_file, "Workspace in which to look up the task id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kInvalid;
  }

  if (validate->parsed()) {
    auto w = load(file);
    if (!w) return kInvalid;
    std::cout << file << ": valid (" << w->presheaves.size() << " presheaves, " << w->morphisms.size()
              << " morphisms, " << w->tasks.size() << " tasks)\n";
    return kPass;
  }

  if (run->parsed()) {
    auto w = load(file);
    if (!w) return kInvalid;
    json report = liftlab::cli::run_tasks(*w, opts);
    std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << out_path << ": cannot write\n";
        return kInvalid;
      }
      out << text;
    }
    return liftlab::cli::report_passed(report) ? kPass : kFailed;
  }

  std::string kind = task;
  if (!explain_file.empty()) {
    auto w = load(explain_file);
    if (!w) return kInvalid;
    auto it = std::find_if(w->tasks.begin(), w->tasks.end(), [&](const auto& t) { return t.id == task; });
    if (it == w->tasks.end()) {
      std::cerr << "no task with id '" << task << "'\n";
      return kInvalid;
    }
    kind = it->kind;
  }
  auto text = liftlab::cli::explain_kind(kind);
  if (!text) {
    std::cerr << "unknown task kind '" << kind << "'; known kinds:";
    for (const auto& k : liftlab::cli::task_kinds()) std::cerr << " " << k;
    std::cerr << "\n";
    return kInvalid;
  }
  std::cout << kind << ": " << *text << "\n";
  return kPass;
}
