// Copyright 2026 The Curate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "curate/external_scorer.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "curate/errors.hpp"
#include "curate/log.hpp"

namespace curate {
namespace {

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Fd& operator=(Fd&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  ~Fd() { reset(); }

  int get() const { return fd_; }
  int release() { return std::exchange(fd_, -1); }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

struct Pipe {
  Fd read;
  Fd write;
};

Pipe make_pipe() {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) {
    throw ScorerLaunchError(fmt::format("pipe: {}", std::strerror(errno)));
  }
  return {Fd(fds[0]), Fd(fds[1])};
}

bool write_all(int fd, const std::string& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    off += static_cast<std::size_t>(n);
  }
  return true;
}

// Line reader over a raw descriptor. Returns nullopt at EOF; a final line
// without a newline is still returned.
class LineReader {
 public:
  explicit LineReader(int fd) : fd_(fd) {}

  std::optional<std::string> next() {
    for (;;) {
      if (const auto nl = buf_.find('\n', scan_); nl != std::string::npos) {
        std::string line = buf_.substr(0, nl);
        buf_.erase(0, nl + 1);
        scan_ = 0;
        return line;
      }
      scan_ = buf_.size();
      char chunk[4096];
      const ssize_t n = ::read(fd_, chunk, sizeof chunk);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        if (buf_.empty()) return std::nullopt;
        std::string rest = std::move(buf_);
        buf_.clear();
        scan_ = 0;
        return rest;
      }
      buf_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  int fd_;
  std::string buf_;
  std::size_t scan_ = 0;
};

class ScorerProcess {
 public:
  explicit ScorerProcess(const std::string& command) {
    ::signal(SIGPIPE, SIG_IGN);
    Pipe in = make_pipe();
    Pipe out = make_pipe();
    Pipe err = make_pipe();
    pid_ = ::fork();
    if (pid_ < 0) throw ScorerLaunchError(fmt::format("fork: {}", std::strerror(errno)));
    if (pid_ == 0) {
      ::dup2(in.read.get(), STDIN_FILENO);
      ::dup2(out.write.get(), STDOUT_FILENO);
      ::dup2(err.write.get(), STDERR_FILENO);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    stdin_ = std::move(in.write);
    stdout_ = std::move(out.read);
    stderr_ = std::move(err.read);
  }

  ScorerProcess(const ScorerProcess&) = delete;
  ScorerProcess& operator=(const ScorerProcess&) = delete;

  ~ScorerProcess() {
    if (pid_ > 0) {
      ::kill(pid_, SIGKILL);
      wait();
    }
  }

  int stdin_fd() const { return stdin_.get(); }
  int stdout_fd() const { return stdout_.get(); }
  int stderr_fd() const { return stderr_.get(); }
  void close_stdin() { stdin_.reset(); }
  void kill() {
    if (pid_ > 0) ::kill(pid_, SIGKILL);
  }

  // Raw waitpid status.
  int wait() {
    int status = 0;
    if (pid_ > 0) {
      while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
      }
      pid_ = -1;
      status_ = status;
    }
    return status_;
  }

 private:
  pid_t pid_ = -1;
  int status_ = 0;
  Fd stdin_;
  Fd stdout_;
  Fd stderr_;
};

struct Expected {
  std::size_t index;
  bool answered = false;
};

}  // namespace

std::vector<ScoreRecord> score_external(std::span<const ScoreItem> items,
                                        const std::string& command) {
  std::vector<ScoreRecord> out(items.size());
  if (items.empty()) return out;
  if (command.empty()) throw ScorerLaunchError("no scorer command configured");

  std::unordered_map<std::string, Expected> pending;
  pending.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!pending.emplace(items[i].image_id, Expected{i}).second) {
      throw ScorerProtocolError("duplicate request id " + items[i].image_id);
    }
    out[i].image_id = items[i].image_id;
  }

  ScorerProcess proc(command);

  std::thread writer([&] {
    for (const ScoreItem& item : items) {
      const nlohmann::json req = {
          {"id", item.image_id},
          {"path", std::filesystem::absolute(item.path).lexically_normal().string()}};
      if (!write_all(proc.stdin_fd(), req.dump() + "\n")) break;
    }
    proc.close_stdin();
  });
  std::thread relay([&] {
    LineReader err(proc.stderr_fd());
    while (auto line = err.next()) log().warn("{}", *line);
  });

  std::optional<std::string> failure;
  std::size_t answered = 0;
  LineReader reader(proc.stdout_fd());
  std::size_t line_no = 0;
  while (auto line = reader.next()) {
    ++line_no;
    auto fail = [&](const std::string& why) {
      failure = fmt::format("scorer response line {}: {} ({})", line_no, why, *line);
    };
    nlohmann::json resp = nlohmann::json::parse(*line, nullptr, false);
    if (resp.is_discarded() || !resp.is_object()) {
      fail("not a JSON object");
      break;
    }
    const auto id = resp.find("id");
    const auto score = resp.find("score");
    if (id == resp.end() || !id->is_string()) {
      fail("missing string field \"id\"");
      break;
    }
    if (score == resp.end() || !score->is_number()) {
      fail("missing numeric field \"score\"");
      break;
    }
    const double value = score->get<double>();
    if (!std::isfinite(value)) {
      fail("non-finite score");
      break;
    }
    const auto it = pending.find(id->get<std::string>());
    if (it == pending.end()) {
      fail("unknown id");
      break;
    }
    if (it->second.answered) {
      fail("duplicate id");
      break;
    }
    it->second.answered = true;
    out[it->second.index].score = value;
    ++answered;
  }

  if (failure) proc.kill();
  writer.join();
  relay.join();
  const int status = proc.wait();
  if (failure) throw ScorerProtocolError(*failure);

  if (WIFEXITED(status) && WEXITSTATUS(status) == 127 && answered == 0) {
    throw ScorerLaunchError("scorer command could not be started: " + command);
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw ScorerProtocolError(
        WIFEXITED(status) ? fmt::format("scorer exited with status {}", WEXITSTATUS(status))
                          : fmt::format("scorer killed by signal {}", WTERMSIG(status)));
  }
  if (answered != items.size()) {
    for (const ScoreItem& item : items) {
      if (!pending.at(item.image_id).answered) {
        throw ScorerProtocolError(
            fmt::format("scorer exited without answering id {} ({} of {} unanswered)",
                        item.image_id, items.size() - answered, items.size()));
      }
    }
  }
  return out;
}

}  // namespace curate
