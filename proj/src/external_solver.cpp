#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "rb/solver.hpp"

namespace rb {

SolveResult parse_solver_output(std::string_view text, int num_vars) {
  std::optional<SolveStatus> status;
  std::vector<int> lits;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("s ", 0) == 0) {
      const std::string word = line.substr(2);
      if (word == "SATISFIABLE") {
        status = SolveStatus::Sat;
      } else if (word == "UNSATISFIABLE") {
        status = SolveStatus::Unsat;
      } else if (word == "UNKNOWN" || word == "INDETERMINATE") {
        status = SolveStatus::Unknown;
      } else {
        throw OutputParseError("unrecognized status line: " + line);
      }
    } else if (line.rfind("v ", 0) == 0 || line == "v") {
      std::istringstream vs(line.substr(1));
      long long lit;
      while (vs >> lit) {
        if (lit != 0) lits.push_back(static_cast<int>(lit));
      }
      if (!vs.eof()) throw OutputParseError("malformed value line: " + line);
    }
  }
  if (!status) throw OutputParseError("no status line in solver output");
  SolveResult result;
  result.status = *status;
  if (*status == SolveStatus::Sat) {
    int max_var = num_vars;
    for (int l : lits) max_var = std::max(max_var, std::abs(l));
    result.assignment.assign(static_cast<std::size_t>(max_var) + 1, false);
    for (int l : lits) result.assignment[std::abs(l)] = l > 0;
  } else if (*status == SolveStatus::Unknown) {
    result.reason = "solver reported unknown";
  }
  return result;
}

namespace {

class TempFile {
 public:
  explicit TempFile(const char* suffix) {
    std::string pattern = (std::filesystem::temp_directory_path() / "rbfind-XXXXXX").string() + suffix;
    std::vector<char> buf(pattern.begin(), pattern.end());
    buf.push_back('\0');
    const int fd = mkstemps(buf.data(), static_cast<int>(std::string_view(suffix).size()));
    if (fd < 0) throw SolverSpawnError("cannot create temporary file");
    close(fd);
    path_ = buf.data();
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

SolveResult solve_external(const CnfInstance& cnf, const std::string& command_template,
                           std::optional<double> timeout_seconds, std::stop_token stop) {
  const auto start = std::chrono::steady_clock::now();
  TempFile input(".cnf");
  TempFile output(".out");
  {
    std::ofstream f(input.path(), std::ios::binary);
    write_dimacs(cnf, f);
    if (!f) throw SolverSpawnError("cannot write " + input.path());
  }
  std::string command = command_template;
  const std::string quoted = shell_quote(input.path());
  if (auto pos = command.find("{file}"); pos != std::string::npos) {
    while (pos != std::string::npos) {
      command.replace(pos, 6, quoted);
      pos = command.find("{file}", pos + quoted.size());
    }
  } else {
    command += " " + quoted;
  }

  const pid_t pid = fork();
  if (pid < 0) throw SolverSpawnError("fork failed");
  if (pid == 0) {
    setpgid(0, 0);
    const int out = open(output.path().c_str(), O_WRONLY | O_TRUNC);
    const int devnull = open("/dev/null", O_RDWR);
    if (out >= 0) dup2(out, STDOUT_FILENO);
    if (devnull >= 0) {
      dup2(devnull, STDIN_FILENO);
      dup2(devnull, STDERR_FILENO);
    }
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);

  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  std::string interrupted;
  int wstatus = 0;
  auto poll = std::chrono::milliseconds(2);
  while (true) {
    if (timeout_seconds && elapsed() >= *timeout_seconds) interrupted = "timeout";
    if (stop.stop_requested()) interrupted = "cancelled";
    if (!interrupted.empty()) {
      kill(-pid, SIGKILL);
      waitpid(pid, &wstatus, 0);
      break;
    }
    const pid_t r = waitpid(pid, &wstatus, WNOHANG);
    if (r == pid) break;
    if (r < 0) throw SolverSpawnError("waitpid failed");
    std::this_thread::sleep_for(poll);
    poll = std::min(poll * 2, std::chrono::milliseconds(50));
  }

  SolveResult result;
  if (!interrupted.empty()) {
    result.reason = interrupted;
    result.stats.seconds = elapsed();
    return result;
  }
  if (WIFSIGNALED(wstatus)) {
    result.reason = "solver crashed (signal " + std::to_string(WTERMSIG(wstatus)) + ")";
    result.stats.seconds = elapsed();
    return result;
  }
  const int code = WIFEXITED(wstatus) ? WEXITSTATUS(wstatus) : -1;
  if (code == 126 || code == 127) {
    throw SolverSpawnError("cannot run solver command: " + command_template);
  }
  const std::string text = slurp(output.path());
  try {
    result = parse_solver_output(text, cnf.num_vars());
  } catch (const OutputParseError&) {
    if (code == 20) {
      result = SolveResult{};
      result.status = SolveStatus::Unsat;
    } else if (code == 10) {
      // Exit code says SAT; the model still has to come from "v" lines.
      const bool has_values = text.rfind("v ", 0) == 0 || text.find("\nv ") != std::string::npos;
      if (!has_values) throw OutputParseError("solver exited with 10 but printed no model");
      result = parse_solver_output("s SATISFIABLE\n" + text, cnf.num_vars());
    } else {
      throw;
    }
  }
  if (result.status == SolveStatus::Sat && !satisfies(cnf, result.assignment)) {
    throw BogusModel("external solver assignment falsifies a clause");
  }
  result.stats.seconds = elapsed();
  return result;
}

SolverSpec SolverSpec::parse(std::string_view text) {
  const auto b = text.find_first_not_of(" \t");
  if (b == std::string_view::npos) return builtin();
  text = text.substr(b, text.find_last_not_of(" \t") - b + 1);
  if (text == "builtin") return builtin();
  return SolverSpec{std::string(text)};
}

SolveResult solve(const CnfInstance& cnf, const SolverSpec& spec, std::optional<double> timeout_seconds,
                  std::stop_token stop) {
  if (spec.is_builtin()) {
    SolveBudget budget;
    budget.timeout_seconds = timeout_seconds;
    return solve_builtin(cnf, budget, std::move(stop));
  }
  return solve_external(cnf, spec.command, timeout_seconds, std::move(stop));
}

}  // namespace rb
