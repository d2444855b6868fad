/**
 * Copyright 2026 The visiontest Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <mutex>
#include <thread>

#include "visiontest/sut.hpp"

extern char** environ;

namespace vt {

namespace {

using Clock = std::chrono::steady_clock;

std::string errno_text(int err) { return std::strerror(err); }

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::string describe_status(int status) {
  if (WIFEXITED(status)) return "exited with status " + std::to_string(WEXITSTATUS(status));
  if (WIFSIGNALED(status)) return "killed by signal " + std::to_string(WTERMSIG(status));
  return "stopped";
}

}  // namespace

class SubprocessAdapter::Process {
 public:
  explicit Process(const SubprocessConfig& config) {
    int to_child[2];
    int from_child[2];
    if (::pipe2(to_child, O_CLOEXEC) != 0) throw std::runtime_error("pipe: " + errno_text(errno));
    if (::pipe2(from_child, O_CLOEXEC) != 0) {
      const int err = errno;
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw std::runtime_error("pipe: " + errno_text(err));
    }

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, to_child[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, from_child[1], STDOUT_FILENO);
    if (!config.working_dir.empty()) {
      posix_spawn_file_actions_addchdir_np(&actions, config.working_dir.c_str());
    }

    std::vector<char*> argv;
    for (const auto& arg : config.command) argv.push_back(const_cast<char*>(arg.c_str()));
    argv.push_back(nullptr);

    const int rc = ::posix_spawnp(&pid_, argv[0], &actions, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(to_child[0]);
    ::close(from_child[1]);
    if (rc != 0) {
      ::close(to_child[1]);
      ::close(from_child[0]);
      pid_ = -1;
      throw std::runtime_error("cannot start " + config.command.front() + ": " + errno_text(rc));
    }
    in_fd_ = to_child[1];
    out_fd_ = from_child[0];
  }

  ~Process() {
    close_fd(in_fd_);
    close_fd(out_fd_);
    if (pid_ > 0 && !reaped_) {
      // Closing stdin asks a well-behaved child to exit; give it a moment.
      for (int i = 0; i < 50 && !try_reap(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
      if (!reaped_) {
        ::kill(pid_, SIGKILL);
        wait_blocking();
      }
    }
  }

  Process(const Process&) = delete;
  Process& operator=(const Process&) = delete;

  bool write_all(std::string_view data) {
    while (!data.empty()) {
      const ssize_t n = ::write(in_fd_, data.data(), data.size());
      if (n < 0) {
        if (errno == EINTR) continue;
        return false;
      }
      data.remove_prefix(static_cast<std::size_t>(n));
    }
    return true;
  }

  enum class ReadStatus { Line, Eof, Timeout, Failed };

  ReadStatus read_line(std::string& line, Clock::time_point deadline) {
    for (;;) {
      const auto newline = buffer_.find('\n');
      if (newline != std::string::npos) {
        line = buffer_.substr(0, newline);
        buffer_.erase(0, newline + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return ReadStatus::Line;
      }
      const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
      if (remaining.count() <= 0) return ReadStatus::Timeout;
      pollfd pfd{out_fd_, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
      if (ready < 0) {
        if (errno == EINTR) continue;
        return ReadStatus::Failed;
      }
      if (ready == 0) return ReadStatus::Timeout;
      char chunk[4096];
      const ssize_t n = ::read(out_fd_, chunk, sizeof(chunk));
      if (n < 0) {
        if (errno == EINTR) continue;
        return ReadStatus::Failed;
      }
      if (n == 0) return ReadStatus::Eof;
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  /// Kills the child if it is still running and reports how it ended.
  std::string terminate() {
    close_fd(in_fd_);
    for (int i = 0; i < 20 && !try_reap(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
    if (!reaped_) {
      ::kill(pid_, SIGKILL);
      wait_blocking();
    }
    return describe_status(status_);
  }

 private:
  static void close_fd(int& fd) {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }

  bool try_reap() {
    if (reaped_) return true;
    const pid_t r = ::waitpid(pid_, &status_, WNOHANG);
    if (r == pid_) reaped_ = true;
    return reaped_;
  }

  void wait_blocking() {
    while (!reaped_) {
      const pid_t r = ::waitpid(pid_, &status_, 0);
      if (r == pid_ || (r < 0 && errno != EINTR)) reaped_ = true;
    }
  }

  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  int status_ = 0;
  bool reaped_ = false;
  std::string buffer_;
};

SubprocessAdapter::SubprocessAdapter(SubprocessConfig config) : config_(std::move(config)) {
  ignore_sigpipe_once();
}

SubprocessAdapter::~SubprocessAdapter() = default;

SutOutput SubprocessAdapter::query(const std::filesystem::path& image, Task task) {
  if (!process_) {
    try {
      process_ = std::make_unique<Process>(config_);
    } catch (const std::exception& e) {
      return SutError{std::string("crash: ") + e.what()};
    }
  }
  const std::uint64_t id = next_id_++;
  const auto deadline = Clock::now() + config_.timeout;

  if (!process_->write_all(encode_request(id, image, task) + "\n")) {
    const std::string how = process_->terminate();
    process_.reset();
    return SutError{"crash: process " + how + " before accepting the request"};
  }

  std::string line;
  switch (process_->read_line(line, deadline)) {
    case Process::ReadStatus::Line: break;
    case Process::ReadStatus::Timeout: {
      process_->terminate();
      process_.reset();
      return SutError{"timeout: no response within " + std::to_string(config_.timeout.count()) + " ms"};
    }
    case Process::ReadStatus::Eof:
    case Process::ReadStatus::Failed: {
      const std::string how = process_->terminate();
      process_.reset();
      return SutError{"crash: process " + how + " without responding"};
    }
  }

  SutOutput out = decode_response(line, id, task);
  if (const auto* err = std::get_if<SutError>(&out); err != nullptr && err->message.rfind("protocol:", 0) == 0) {
    // The stream may be out of step; start over on the next query.
    process_->terminate();
    process_.reset();
  }
  return out;
}

}  // namespace vt
