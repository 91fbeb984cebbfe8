#include "process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <csignal>
#include <cstring>
#include <mutex>
#include <stdexcept>

extern char** environ;

namespace codevo::detail {

namespace {

struct Pipe {
  int fds[2] = {-1, -1};

  Pipe() {
    if (::pipe2(fds, O_CLOEXEC) != 0) throw std::runtime_error(std::string("pipe: ") + std::strerror(errno));
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  Pipe(const Pipe&) = delete;
  Pipe& operator=(const Pipe&) = delete;

  int read_end() const { return fds[0]; }
  int write_end() const { return fds[1]; }
  void close_read() {
    if (fds[0] >= 0) ::close(fds[0]);
    fds[0] = -1;
  }
  void close_write() {
    if (fds[1] >= 0) ::close(fds[1]);
    fds[1] = -1;
  }
};

class SpawnActions {
 public:
  SpawnActions() { posix_spawn_file_actions_init(&actions_); }
  ~SpawnActions() { posix_spawn_file_actions_destroy(&actions_); }
  SpawnActions(const SpawnActions&) = delete;
  SpawnActions& operator=(const SpawnActions&) = delete;

  posix_spawn_file_actions_t* get() { return &actions_; }

 private:
  posix_spawn_file_actions_t actions_;
};

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const std::filesystem::path& cwd,
                          const std::string& input) {
  if (argv.empty()) throw std::invalid_argument("run_process: empty argv");
  // A child that exits before consuming stdin must not kill us with SIGPIPE.
  static std::once_flag sigpipe_once;
  std::call_once(sigpipe_once, [] { std::signal(SIGPIPE, SIG_IGN); });

  Pipe in_pipe, out_pipe, err_pipe;
  SpawnActions actions;
  posix_spawn_file_actions_adddup2(actions.get(), in_pipe.read_end(), STDIN_FILENO);
  posix_spawn_file_actions_adddup2(actions.get(), out_pipe.write_end(), STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(actions.get(), err_pipe.write_end(), STDERR_FILENO);
  if (!cwd.empty()) {
#if defined(__GLIBC__) && (__GLIBC__ > 2 || (__GLIBC__ == 2 && __GLIBC_MINOR__ >= 29))
    posix_spawn_file_actions_addchdir_np(actions.get(), cwd.c_str());
#else
#error "posix_spawn_file_actions_addchdir_np is required"
#endif
  }

  std::vector<char*> args;
  args.reserve(argv.size() + 1);
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = 0;
  const int rc = ::posix_spawnp(&pid, args[0], actions.get(), nullptr, args.data(), environ);
  if (rc != 0) throw std::runtime_error("cannot spawn " + argv[0] + ": " + std::strerror(rc));

  in_pipe.close_read();
  out_pipe.close_write();
  err_pipe.close_write();

  ProcessResult result;
  std::size_t written = 0;
  if (input.empty()) {
    in_pipe.close_write();
  } else {
    ::fcntl(in_pipe.write_end(), F_SETFL, ::fcntl(in_pipe.write_end(), F_GETFL) | O_NONBLOCK);
  }

  std::array<char, 65536> buf;
  bool out_open = true, err_open = true;
  while (out_open || err_open) {
    std::array<pollfd, 3> fds{};
    nfds_t n = 0;
    int out_idx = -1, err_idx = -1, in_idx = -1;
    if (out_open) { out_idx = static_cast<int>(n); fds[n++] = {out_pipe.read_end(), POLLIN, 0}; }
    if (err_open) { err_idx = static_cast<int>(n); fds[n++] = {err_pipe.read_end(), POLLIN, 0}; }
    if (in_pipe.write_end() >= 0) { in_idx = static_cast<int>(n); fds[n++] = {in_pipe.write_end(), POLLOUT, 0}; }

    if (::poll(fds.data(), n, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    auto drain = [&](int idx, int fd, std::string& sink, bool& open) {
      if (idx < 0 || fds[idx].revents == 0) return;
      const ssize_t got = ::read(fd, buf.data(), buf.size());
      if (got > 0) {
        sink.append(buf.data(), static_cast<std::size_t>(got));
      } else if (got == 0 || errno != EINTR) {
        open = false;
      }
    };
    drain(out_idx, out_pipe.read_end(), result.out, out_open);
    drain(err_idx, err_pipe.read_end(), result.err, err_open);
    if (in_idx >= 0 && fds[in_idx].revents != 0) {
      if (fds[in_idx].revents & (POLLERR | POLLHUP)) {
        in_pipe.close_write();
      } else {
        const ssize_t put = ::write(in_pipe.write_end(), input.data() + written, input.size() - written);
        if (put > 0) written += static_cast<std::size_t>(put);
        if (put < 0 && errno != EINTR && errno != EAGAIN) in_pipe.close_write();
        if (written == input.size()) in_pipe.close_write();
      }
    }
  }
  in_pipe.close_write();

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return result;
}

}  // namespace codevo::detail
