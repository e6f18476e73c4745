#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <fcntl.h>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>

#include "pvinspect/dataset.hpp"
#include "pvinspect/detector.hpp"
#include "pvinspect/error.hpp"
#include "pvinspect/image_io.hpp"

namespace pvinspect::detector {
namespace {

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

std::string substitute(std::string cmd, const std::string& key, const std::string& value) {
  for (std::size_t pos = cmd.find(key); pos != std::string::npos; pos = cmd.find(key, pos + value.size())) {
    cmd.replace(pos, key.size(), value);
  }
  return cmd;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    std::string templ = (std::filesystem::temp_directory_path() / "pvinspect-XXXXXX").string();
    if (!mkdtemp(templ.data())) throw DetectorError("cannot create scratch directory: " + std::string(std::strerror(errno)));
    path_ = templ;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::chrono::milliseconds default_timeout() {
  if (const char* env = std::getenv("PVINSPECT_DETECTOR_TIMEOUT")) {
    char* end = nullptr;
    const double s = std::strtod(env, &end);
    if (end != env && *end == '\0' && s > 0.0) {
      return std::chrono::milliseconds(static_cast<long long>(s * 1000.0));
    }
  }
  return std::chrono::milliseconds(60'000);
}

struct ProcessOutcome {
  bool timed_out = false;
  int status = 0;
};

ProcessOutcome run_shell(const std::string& command, const std::filesystem::path& cwd,
                         const std::filesystem::path& log, std::chrono::milliseconds timeout) {
  const std::string cwd_s = cwd.string();
  const std::string log_s = log.string();
  const pid_t pid = fork();
  if (pid < 0) throw DetectorError("fork failed: " + std::string(std::strerror(errno)));
  if (pid == 0) {
    setpgid(0, 0);
    if (!cwd_s.empty() && chdir(cwd_s.c_str()) != 0) _exit(127);
    const int fd = open(log_s.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd >= 0) {
      dup2(fd, STDOUT_FILENO);
      dup2(fd, STDERR_FILENO);
      close(fd);
    }
    const int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) {
      dup2(devnull, STDIN_FILENO);
      close(devnull);
    }
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);

  const auto deadline = std::chrono::steady_clock::now() + timeout;
  auto pause = std::chrono::microseconds(200);
  ProcessOutcome outcome;
  while (true) {
    int status = 0;
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) {
      outcome.status = status;
      return outcome;
    }
    if (r < 0 && errno != EINTR) throw DetectorError("waitpid failed: " + std::string(std::strerror(errno)));
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      outcome.timed_out = true;
      return outcome;
    }
    std::this_thread::sleep_for(pause);
    pause = std::min(pause * 2, std::chrono::microseconds(20'000));
  }
}

DetectionSet run_external(const ExternalConfig& cfg, const Image& img, std::string image_id) {
  TempDir dir;
  const bool radiometric = std::holds_alternative<Gray16Image>(img);
  const auto input = dir.path() / (radiometric ? "input.tiff" : "input.png");
  const auto output = dir.path() / "output.csv";
  const auto log = dir.path() / "detector.log";
  io::write_image(input, img);
  std::ofstream(output).close();

  std::string cmd = substitute(cfg.command, "{input}", shell_quote(input.string()));
  cmd = substitute(cmd, "{output}", shell_quote(output.string()));
  const ProcessOutcome outcome = run_shell(cmd, cfg.working_dir, log, cfg.timeout);
  const std::string diagnostics = slurp(log);

  if (outcome.timed_out) {
    throw DetectorError("detector timed out after " + std::to_string(cfg.timeout.count()) + " ms",
                        diagnostics);
  }
  if (!WIFEXITED(outcome.status)) {
    throw DetectorError("detector terminated by a signal", diagnostics);
  }
  if (WEXITSTATUS(outcome.status) != 0) {
    throw DetectorError("detector exited with status " + std::to_string(WEXITSTATUS(outcome.status)),
                        diagnostics);
  }

  const FrameSize frame = frame_of(img);
  DetectionSet out{std::move(image_id), RigidTransform::identity(frame), {}};
  try {
    for (auto& d : dataset::parse_detections_csv(slurp(output))) {
      d.box = clip(d.box, frame.width, frame.height);
      if (d.box.area() > 0.0) out.detections.push_back(std::move(d));
    }
  } catch (const ParseError& e) {
    throw DetectorError(std::string("detector output is malformed: ") + e.what(), diagnostics);
  }
  return out;
}

}  // namespace

DetectorHandle DetectorHandle::make_builtin(BuiltinConfig cfg) {
  DetectorHandle h;
  h.kind = DetectorKind::builtin_thermal;
  h.builtin = std::move(cfg);
  return h;
}

DetectorHandle DetectorHandle::make_external(std::string command, std::filesystem::path working_dir) {
  DetectorHandle h;
  h.kind = DetectorKind::external;
  h.external = {std::move(command), std::move(working_dir), default_timeout()};
  return h;
}

void validate(const DetectorHandle& handle) {
  if (handle.kind == DetectorKind::external) {
    const auto& cmd = handle.external.command;
    if (cmd.find("{input}") == std::string::npos || cmd.find("{output}") == std::string::npos) {
      throw InvalidArgument("detector command must contain {input} and {output}: " + cmd);
    }
    if (handle.external.timeout.count() <= 0) throw InvalidArgument("detector timeout must be positive");
  } else {
    const auto& c = handle.builtin;
    if (!(c.trigger > 0.0) || c.min_area < 1) {
      throw InvalidArgument("builtin detector thresholds must be positive");
    }
  }
}

DetectionSet detect(const DetectorHandle& handle, const Image& img, std::string image_id) {
  validate(handle);
  if (handle.kind == DetectorKind::builtin_thermal) {
    DetectionSet out = detect_builtin(img, handle.builtin, std::move(image_id));
    return out;
  }
  return run_external(handle.external, img, std::move(image_id));
}

}  // namespace pvinspect::detector
