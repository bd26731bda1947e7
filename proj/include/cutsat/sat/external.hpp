// Copyright 2026 The cutsat Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs an external SAT or MaxSAT solver through /bin/sh and parses the
// competition output format ("s ...", "o COST", "v ..." lines). POSIX only.

#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cutsat/sat/solver.hpp"

namespace cutsat::sat {

inline constexpr const char* kSolverCommandEnv = "CUTSAT_SOLVER_CMD";

struct ExternalResult {
  SolveVerdict verdict;
  bool optimum = false;              // "s OPTIMUM FOUND"
  std::optional<uint64_t> cost;      // last "o" line
  int exit_code = -1;                // -1 if killed or never started
  bool timed_out = false;
  std::string diagnostic;            // empty on a clean run
  std::string stderr_text;
};

// Single-quotes `s` for /bin/sh.
inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

// Replaces every "{input}" with the quoted path, or appends the path when the
// template has no placeholder.
inline std::string expand_command(const std::string& tmpl, const std::string& input_path) {
  const std::string key = "{input}";
  const std::string quoted = shell_quote(input_path);
  std::string out;
  size_t pos = 0;
  bool found = false;
  while (true) {
    const size_t at = tmpl.find(key, pos);
    if (at == std::string::npos) break;
    out.append(tmpl, pos, at - pos);
    out += quoted;
    pos = at + key.size();
    found = true;
  }
  out.append(tmpl, pos, std::string::npos);
  if (!found) out += " " + quoted;
  return out;
}

// Parses solver stdout. Values not mentioned on "v" lines default to false.
// Accepts both literal lists ("v 1 -2 3 0") and bit strings ("v 101").
inline void parse_solver_output(const std::string& text, int num_vars, ExternalResult& r) {
  std::istringstream in(text);
  std::string line;
  bool saw_status = false;
  bool saw_values = false;
  std::vector<bool> model(static_cast<size_t>(num_vars) + 1, false);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() < 2 || line[1] != ' ') continue;
    const std::string rest = line.substr(2);
    switch (line[0]) {
      case 's': {
        saw_status = true;
        if (rest.rfind("SATISFIABLE", 0) == 0) {
          r.verdict.status = Status::kSat;
        } else if (rest.rfind("UNSATISFIABLE", 0) == 0) {
          r.verdict.status = Status::kUnsat;
        } else if (rest.rfind("OPTIMUM FOUND", 0) == 0) {
          r.verdict.status = Status::kSat;
          r.optimum = true;
        } else {
          r.verdict.status = Status::kUnknown;
        }
        break;
      }
      case 'o': {
        try {
          r.cost = std::stoull(rest);
        } catch (const std::exception&) {
          r.diagnostic = "unparseable cost line '" + line + "'";
        }
        break;
      }
      case 'v': {
        saw_values = true;
        std::istringstream vs(rest);
        std::vector<std::string> tokens;
        for (std::string t; vs >> t;) tokens.push_back(t);
        if (tokens.size() == 1 && tokens[0] != "0" &&
            tokens[0].find_first_not_of("01") == std::string::npos) {
          const auto& bits = tokens[0];
          for (size_t i = 0; i < bits.size() && static_cast<int>(i) < num_vars; ++i)
            model[i + 1] = bits[i] == '1';
          break;
        }
        for (const auto& t : tokens) {
          long long lit = 0;
          try {
            lit = std::stoll(t);
          } catch (const std::exception&) {
            r.diagnostic = "unparseable value '" + t + "'";
            continue;
          }
          if (lit == 0) continue;
          const long long v = std::llabs(lit);
          if (v > num_vars) continue;  // auxiliary variables of the solver
          model[static_cast<size_t>(v)] = lit > 0;
        }
        break;
      }
      default:
        break;
    }
  }
  if (!saw_status) {
    if (r.diagnostic.empty()) r.diagnostic = "no status line in solver output";
    r.verdict.status = Status::kUnknown;
    return;
  }
  if (r.verdict.status == Status::kSat) {
    if (!saw_values) {
      r.diagnostic = "satisfiable verdict without a model";
      r.verdict.status = Status::kUnknown;
      r.optimum = false;
      return;
    }
    r.verdict.model = std::move(model);
  }
}

// Runs `command_template` (see expand_command) on `problem_path`. A timeout,
// spawn failure or unparseable output yields kUnknown with a diagnostic.
inline ExternalResult run_external(const std::string& command_template,
                                   const std::string& problem_path, int num_vars,
                                   std::optional<double> timeout_seconds = std::nullopt) {
  ExternalResult r;
  const std::string cmd = expand_command(command_template, problem_path);

  int out_pipe[2];
  int err_pipe[2];
  if (pipe(out_pipe) != 0) {
    r.diagnostic = std::string("pipe: ") + std::strerror(errno);
    return r;
  }
  if (pipe(err_pipe) != 0) {
    close(out_pipe[0]);
    close(out_pipe[1]);
    r.diagnostic = std::string("pipe: ") + std::strerror(errno);
    return r;
  }

  const pid_t pid = fork();
  if (pid < 0) {
    r.diagnostic = std::string("fork: ") + std::strerror(errno);
    for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) close(fd);
    return r;
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) close(fd);
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  close(out_pipe[1]);
  close(err_pipe[1]);

  using Clock = std::chrono::steady_clock;
  std::optional<Clock::time_point> deadline;
  if (timeout_seconds)
    deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(*timeout_seconds));

  std::string out_text;
  std::string err_text;
  pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  int open_fds = 2;
  char buf[65536];
  while (open_fds > 0) {
    int wait_ms = -1;
    if (deadline) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*deadline - Clock::now());
      if (left.count() <= 0) {
        r.timed_out = true;
        break;
      }
      wait_ms = static_cast<int>(std::min<long long>(left.count(), 1000));
    }
    const int n = poll(fds, 2, wait_ms);
    if (n < 0) {
      if (errno == EINTR) continue;
      r.diagnostic = std::string("poll: ") + std::strerror(errno);
      break;
    }
    for (int i = 0; i < 2; ++i) {
      if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      const ssize_t got = read(fds[i].fd, buf, sizeof buf);
      if (got > 0) {
        (i == 0 ? out_text : err_text).append(buf, static_cast<size_t>(got));
      } else {
        close(fds[i].fd);
        fds[i].fd = -1;
        --open_fds;
      }
    }
  }
  if (r.timed_out || !r.diagnostic.empty()) kill(-pid, SIGKILL);
  for (auto& f : fds)
    if (f.fd >= 0) close(f.fd);

  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  r.stderr_text = err_text;
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);

  if (r.timed_out) {
    r.diagnostic = "external solver timed out";
    r.verdict.status = Status::kUnknown;
    return r;
  }
  if (!r.diagnostic.empty()) return r;
  if (WIFSIGNALED(status)) {
    r.diagnostic = "external solver killed by signal " + std::to_string(WTERMSIG(status));
    if (!err_text.empty()) r.diagnostic += ": " + err_text;
    return r;
  }
  if (r.exit_code == 127) {
    r.diagnostic = "external solver could not be started: " + err_text;
    return r;
  }
  parse_solver_output(out_text, num_vars, r);
  if (!r.diagnostic.empty() && !err_text.empty()) r.diagnostic += ": " + err_text;
  return r;
}

// A file removed when the object goes out of scope.
class TempFile {
 public:
  explicit TempFile(const std::string& suffix) {
    std::string tmpl = (std::filesystem::temp_directory_path() / "cutsat-XXXXXX").string() + suffix;
    std::vector<char> name(tmpl.begin(), tmpl.end());
    name.push_back('\0');
    const int fd = mkstemps(name.data(), static_cast<int>(suffix.size()));
    if (fd < 0) throw std::runtime_error(std::string("mkstemps: ") + std::strerror(errno));
    close(fd);
    path_ = name.data();
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }

  const std::string& path() const { return path_; }

  void write(const std::string& content) const {
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path_);
  }

 private:
  std::string path_;
};

// Template from the environment, or empty.
inline std::string default_solver_command() {
  const char* v = std::getenv(kSolverCommandEnv);
  return v ? std::string(v) : std::string();
}

}  // namespace cutsat::sat
