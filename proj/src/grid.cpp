#include "rb/grid.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "rb/model_io.hpp"

namespace rb::grid {

std::set<std::string> implication_closure(const std::set<std::string>& assumed) {
  struct Rule {
    const char* a;
    const char* b;
    const char* then;
  };
  static constexpr Rule kRules[] = {
      {"D4", "D5", "D3"}, {"D3", "D6", "D4"}, {"D1", "D4", "D6"},
      {"D2", "D3", "D5"}, {"D5", "D1", "D2"}, {"D6", "D2", "D1"},
  };
  std::set<std::string> out = assumed;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule& r : kRules) {
      if (out.count(r.a) && out.count(r.b) && out.insert(r.then).second) changed = true;
    }
  }
  return out;
}

std::optional<LdMode> ld_mode_from_name(std::string_view s) {
  if (s == "assume") return LdMode::Assume;
  if (s == "omit") return LdMode::Omit;
  if (s == "both") return LdMode::Both;
  return std::nullopt;
}

namespace {

bool is_distributivity_name(const std::string& s) {
  const auto& names = distributivity_names();
  return std::find(names.begin(), names.end(), s) != names.end();
}

}  // namespace

void GridConfig::validate() const {
  if (targets.empty()) throw ConfigError("no targets");
  for (const auto& t : targets) {
    if (!is_distributivity_name(t)) throw ConfigError("target must be one of D1..D6, got " + t);
  }
  if (policy == AssumptionPolicy::Explicit) {
    if (subsets.empty()) throw ConfigError("explicit assumption policy needs at least one subset");
    for (const auto& s : subsets)
      for (const auto& name : s)
        if (!is_distributivity_name(name)) throw ConfigError("assumption must be one of D1..D6, got " + name);
  }
  if (min_size < 1) throw ConfigError("minimum size must be at least 1");
  if (min_size > max_size) throw ConfigError("minimum size exceeds maximum size");
  if (max_size > size_ceiling) {
    throw ConfigError("maximum size " + std::to_string(max_size) + " exceeds the ceiling " +
                      std::to_string(size_ceiling));
  }
  if (size_ceiling > kMaxEncodableSize) throw ConfigError("size ceiling exceeds the encoding limit");
  if (workers < 1) throw ConfigError("worker count must be at least 1");
  if (timeout_seconds && *timeout_seconds < 0) throw ConfigError("timeout must be nonnegative");
}

std::string goal_key(const SearchTask& task) {
  const std::string key = task.key();
  return key.substr(key.find(';') + 1);
}

std::vector<GridTask> build_grid(const GridConfig& config) {
  config.validate();
  std::vector<bool> ld_values;
  if (config.ld == LdMode::Omit || config.ld == LdMode::Both) ld_values.push_back(false);
  if (config.ld == LdMode::Assume || config.ld == LdMode::Both) ld_values.push_back(true);

  std::vector<GridTask> out;
  for (const std::string& target : config.targets) {
    std::vector<std::vector<std::string>> assumption_sets;
    if (config.policy == AssumptionPolicy::AllOthers) {
      std::vector<std::string> others;
      for (const auto& name : distributivity_names())
        if (name != target) others.push_back(name);
      assumption_sets.push_back(std::move(others));
    } else {
      for (auto s : config.subsets) {
        if (std::find(s.begin(), s.end(), target) != s.end()) continue;
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        assumption_sets.push_back(std::move(s));
      }
    }
    for (bool ld : ld_values) {
      for (const auto& assume : assumption_sets) {
        const bool expect_unsat =
            ld && implication_closure(std::set<std::string>(assume.begin(), assume.end())).count(target) > 0;
        for (int n = config.min_size; n <= config.max_size; ++n) {
          out.push_back(GridTask{make_task(n, assume, target, ld), expect_unsat});
        }
      }
    }
  }
  return out;
}

bool SearchResult::is_final() const {
  return !(reason.rfind("error:", 0) == 0 || reason == "cancelled");
}

namespace {

nlohmann::json identity_ref(const Identity& id) {
  try {
    if (builtin_identity(id.name) == id) return id.name;
  } catch (const UnknownName&) {
  }
  return id.name + ": " + format_identity(id);
}

Identity identity_from_ref(const std::string& ref) {
  const auto colon = ref.find(':');
  if (colon == std::string::npos) return builtin_identity(ref);
  return parse_identity(ref.substr(colon + 1), ref.substr(0, colon));
}

}  // namespace

nlohmann::json task_to_json(const GridTask& t) {
  nlohmann::json assume = nlohmann::json::array();
  auto ids = t.task.assume;
  std::sort(ids.begin(), ids.end(), [](const Identity& a, const Identity& b) { return a.name < b.name; });
  for (const Identity& id : ids) assume.push_back(identity_ref(id));
  return {{"size", t.task.size},
          {"assume", std::move(assume)},
          {"refute", t.task.refute ? identity_ref(*t.task.refute) : nlohmann::json(nullptr)},
          {"distributive", t.task.distributive},
          {"expect_unsat", t.expect_unsat}};
}

GridTask task_from_json(const nlohmann::json& j) {
  GridTask t;
  t.task.size = j.at("size").get<int>();
  for (const auto& a : j.at("assume")) t.task.assume.push_back(identity_from_ref(a.get<std::string>()));
  if (!j.at("refute").is_null()) t.task.refute = identity_from_ref(j.at("refute").get<std::string>());
  t.task.distributive = j.at("distributive").get<bool>();
  t.expect_unsat = j.value("expect_unsat", false);
  t.task.validate();
  return t;
}

nlohmann::json result_to_json(const SearchResult& r) {
  nlohmann::json j = {{"task", task_to_json(r.task)},
                      {"status", std::string(status_name(r.status))},
                      {"seconds", r.seconds},
                      {"solver", r.solver}};
  if (r.model) j["model"] = to_json(*r.model);
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (r.timeout_seconds) j["timeout"] = *r.timeout_seconds;
  return j;
}

SearchResult result_from_json(const nlohmann::json& j) {
  SearchResult r;
  r.task = task_from_json(j.at("task"));
  const auto status = status_from_name(j.at("status").get<std::string>());
  if (!status) throw IoError("unknown status " + j.at("status").dump());
  r.status = *status;
  r.seconds = j.at("seconds").get<double>();
  r.solver = j.at("solver").get<std::string>();
  if (j.contains("model")) r.model = binar_from_json(j.at("model"));
  r.reason = j.value("reason", std::string());
  if (j.contains("timeout")) r.timeout_seconds = j.at("timeout").get<double>();
  if (r.status == SolveStatus::Sat && !r.model) throw IoError("SAT record without a model");
  return r;
}

void persist_result(std::ostream& out, const SearchResult& r) {
  if (r.status == SolveStatus::Sat) {
    if (!r.model) throw UnverifiedModel("SAT result without a model: " + r.task.task.key());
    const auto report = verify_model(*r.model, r.task.task.assumed_identities(), r.task.task.refute);
    if (!report.pass()) throw UnverifiedModel(r.task.task.key() + ": " + report.summary());
  }
  out << result_to_json(r).dump() << '\n';
  out.flush();
  if (!out) throw IoError("write failed");
}

LoadedResults load_results(const std::filesystem::path& dir) {
  LoadedResults loaded;
  const auto path = dir / kResultsFile;
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return loaded;
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  while (!lines.empty() && lines.back().find_first_not_of(" \t\r") == std::string::npos) lines.pop_back();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      loaded.results.push_back(result_from_json(nlohmann::json::parse(lines[i])));
    } catch (const std::exception& e) {
      if (i + 1 == lines.size()) {
        loaded.warnings.push_back(path.string() + ":" + std::to_string(i + 1) +
                                  ": dropped incomplete final record (" + e.what() + ")");
      } else {
        throw IoError(path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
      }
    }
  }
  return loaded;
}

SearchResult run_task(const GridTask& task, const SolverSpec& solver, std::optional<double> timeout_seconds,
                      std::stop_token stop, const EncodeOptions& encoding) {
  SearchResult r;
  r.task = task;
  r.solver = solver.describe();
  r.timeout_seconds = timeout_seconds;
  const auto start = std::chrono::steady_clock::now();
  try {
    const CnfInstance cnf = encode_search(task.task, encoding);
    const SolveResult solved = solve(cnf, solver, timeout_seconds, stop);
    r.status = solved.status;
    r.reason = solved.reason;
    if (solved.status == SolveStatus::Sat) {
      FiniteBinar model = decode_model(solved.assignment, cnf.varmap);
      const auto report = verify_model(model, task.task.assumed_identities(), task.task.refute);
      if (!report.pass()) {
        r.status = SolveStatus::Unknown;
        r.reason = "error: decoded model failed verification: " + report.summary();
      } else {
        r.model = std::move(model);
      }
    }
  } catch (const std::exception& e) {
    r.status = SolveStatus::Unknown;
    r.model.reset();
    r.reason = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace {

template <class T>
class Channel {
 public:
  void push(T value) {
    {
      std::lock_guard lock(mu_);
      items_.push_back(std::move(value));
    }
    cv_.notify_one();
  }
  void close() {
    {
      std::lock_guard lock(mu_);
      closed_ = true;
    }
    cv_.notify_all();
  }
  std::optional<T> pop() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return !items_.empty() || closed_; });
    if (items_.empty()) return std::nullopt;
    T v = std::move(items_.front());
    items_.pop_front();
    return v;
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<T> items_;
  bool closed_ = false;
};

struct Goal {
  std::vector<const GridTask*> tasks;  // ascending size
};

}  // namespace

RunSummary run_grid(const std::vector<GridTask>& tasks, const GridConfig& config,
                    const std::function<void(const SearchResult&)>& on_result, std::stop_token stop) {
  RunSummary summary;
  std::map<std::string, SearchResult> done;
  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    auto loaded = load_results(config.out_dir);
    for (auto& r : loaded.results) {
      if (r.is_final()) done.insert_or_assign(r.task.task.key(), std::move(r));
    }
  }

  std::vector<Goal> goals;
  std::map<std::string, std::size_t> goal_index;
  for (const GridTask& t : tasks) {
    const auto [it, fresh] = goal_index.try_emplace(goal_key(t.task), goals.size());
    if (fresh) goals.emplace_back();
    goals[it->second].tasks.push_back(&t);
  }
  for (Goal& g : goals) {
    std::stable_sort(g.tasks.begin(), g.tasks.end(),
                     [](const GridTask* a, const GridTask* b) { return a->task.size < b->task.size; });
  }

  Channel<SearchResult> results;
  std::atomic<std::size_t> next_goal{0};
  std::atomic<std::size_t> invocations{0}, resumed{0};

  auto worker = [&](std::stop_token worker_stop) {
    while (true) {
      const std::size_t gi = next_goal.fetch_add(1);
      if (gi >= goals.size()) return;
      std::optional<int> solved_at;
      for (const GridTask* t : goals[gi].tasks) {
        const std::string key = t->task.key();
        if (auto it = done.find(key); it != done.end()) {
          ++resumed;
          if (it->second.status == SolveStatus::Sat) solved_at = std::min(solved_at.value_or(t->task.size), t->task.size);
          continue;
        }
        SearchResult r;
        if (solved_at) {
          r.task = *t;
          r.solver = config.solver.describe();
          r.reason = "skipped: goal solved at size " + std::to_string(*solved_at);
        } else if (stop.stop_requested() || worker_stop.stop_requested()) {
          return;
        } else {
          ++invocations;
          r = run_task(*t, config.solver, config.timeout_seconds, stop);
          if (r.status == SolveStatus::Sat) solved_at = t->task.size;
        }
        results.push(std::move(r));
      }
    }
  };

  std::ofstream out;
  if (!config.out_dir.empty()) {
    out.open(config.out_dir / kResultsFile, std::ios::app);
    if (!out) throw IoError("cannot open " + (config.out_dir / kResultsFile).string());
  }

  {
    std::vector<std::jthread> pool;
    const int n_workers = std::max(1, std::min<int>(config.workers, static_cast<int>(goals.size())));
    std::atomic<int> running{n_workers};
    for (int i = 0; i < n_workers; ++i) {
      pool.emplace_back([&](std::stop_token st) {
        worker(st);
        if (--running == 0) results.close();
      });
    }
    if (goals.empty()) results.close();

    while (auto r = results.pop()) {
      if (r->reason.rfind("error:", 0) == 0) ++summary.internal_errors;
      if (r->status == SolveStatus::Sat && r->task.expect_unsat) ++summary.expect_unsat_violations;
      if (out.is_open()) {
        try {
          persist_result(out, *r);
        } catch (const UnverifiedModel& e) {
          ++summary.internal_errors;
          r->status = SolveStatus::Unknown;
          r->model.reset();
          r->reason = std::string("error: ") + e.what();
          persist_result(out, *r);
        }
      }
      if (on_result) on_result(*r);
      summary.results.push_back(std::move(*r));
    }
  }
  summary.solver_invocations = invocations.load();
  summary.resumed = resumed.load();
  return summary;
}

}  // namespace rb::grid
