#pragma once

// Workspace documents: a category, named presheaves and morphisms over it, and an
// ordered list of tasks. Everything in a workspace lives over the terminal presheaf
// except where a task names a base map explicitly.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "liftlab/fincat.hpp"

namespace liftlab::cli {

using json = nlohmann::json;

struct TaskRecord {
  std::string id;
  std::string kind;
  json inputs = json::object();
  json expect = json::object();
  json options = json::object();
  bool operator==(const TaskRecord&) const = default;
};

struct Workspace {
  CatRef cat;
  std::map<std::string, Presheaf> presheaves;
  std::map<std::string, PshMor> morphisms;
  std::vector<TaskRecord> tasks;
};

/// Value equality: categories, tables, labels and tasks.
bool operator==(const Workspace& a, const Workspace& b);

struct ParseResult {
  std::optional<Workspace> workspace;
  std::vector<std::string> errors;  // each prefixed with a line:column or a JSON pointer
};

ParseResult parse_workspace(const std::string& text);
/// Canonical document; categories are always written with explicit composition tables.
json serialize_workspace(const Workspace& w);

struct RunOptions {
  std::uint64_t budget = kDefaultBudget;
  int bound = 2;
  bool parallel = false;
};

inline constexpr int kReportSchema = 1;

/// The report document. Statuses are "pass", "none", "fail", "budget-exceeded" and
/// "error"; only the first two count as passing.
json run_tasks(const Workspace& w, const RunOptions& opts);
bool report_passed(const json& report);

/// Task kinds and a description of what each computes.
const std::vector<std::string>& task_kinds();
std::optional<std::string> explain_kind(const std::string& kind);

}  // namespace liftlab::cli
