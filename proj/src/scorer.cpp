#include "vocxai/scorer.hpp"
#include "vocxai/errors.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>
#include <mutex>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

namespace vocxai {

using ordered_json = nlohmann::ordered_json;

std::string_view orientation_name(ScoreOrientation o) {
  return o == ScoreOrientation::spoof_high ? "spoof_high" : "bonafide_high";
}

ScoreOrientation parse_orientation(std::string_view name) {
  if (name == "spoof_high") return ScoreOrientation::spoof_high;
  if (name == "bonafide_high") return ScoreOrientation::bonafide_high;
  throw ProtocolError("unknown score orientation: " + std::string(name));
}

double band_energy(const Waveform& x, double f_low_hz, double f_high_hz, const StftConfig& cfg) {
  const double nyquist = x.sample_rate / 2.0;
  if (!(f_low_hz >= 0.0 && f_low_hz <= f_high_hz && f_high_hz <= nyquist)) {
    throw InvalidArgument("band must satisfy 0 <= low <= high <= Nyquist");
  }
  const double bin_hz = static_cast<double>(x.sample_rate) / static_cast<double>(cfg.fft_size);
  const auto k_lo = static_cast<std::size_t>(std::ceil(f_low_hz / bin_hz));
  const auto k_hi = static_cast<std::size_t>(std::floor(f_high_hz / bin_hz));
  if (k_lo > k_hi) throw InvalidArgument("band contains no STFT bin");
  const Spectrogram spec = stft(x, cfg);
  double sum = 0.0;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    for (std::size_t t = 0; t < spec.frames(); ++t) {
      const double m = spec.magnitude(k, t);
      sum += m * m;
    }
  }
  return sum / static_cast<double>((k_hi - k_lo + 1) * spec.frames());
}

double dummy_band_energy_score(const Waveform& x, double f_low_hz, double f_high_hz,
                               double ref_energy, const StftConfig& cfg) {
  if (!(ref_energy > 0.0)) throw InvalidArgument("reference energy must be positive");
  return std::clamp(1.0 - band_energy(x, f_low_hz, f_high_hz, cfg) / ref_energy, 0.0, 1.0);
}

BandEnergyScorer::BandEnergyScorer(double f_low_hz, double f_high_hz, double ref_energy,
                                   StftConfig cfg)
    : f_low_hz_(f_low_hz), f_high_hz_(f_high_hz), ref_energy_(ref_energy), cfg_(cfg) {
  if (!(ref_energy > 0.0)) throw InvalidArgument("reference energy must be positive");
  if (!(f_low_hz >= 0.0 && f_low_hz <= f_high_hz)) throw InvalidArgument("empty band");
  cfg_.validate();
}

ScoreOutcome BandEnergyScorer::score(const Waveform& audio, const std::string&) {
  try {
    return {dummy_band_energy_score(audio, f_low_hz_, f_high_hz_, ref_energy_, cfg_), {}};
  } catch (const Error& e) {
    return {std::nullopt, e.what()};
  }
}

// --- protocol -----------------------------------------------------------------

namespace protocol {

namespace {

ordered_json parse_object(std::string_view line, const char* what) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error&) {
    throw ProtocolError(std::string("malformed ") + what + " line: '" + std::string(line) + "'");
  }
  if (!j.is_object()) {
    throw ProtocolError(std::string(what) + " is not a JSON object: '" + std::string(line) + "'");
  }
  return j;
}

[[noreturn]] void bad(const char* what, std::string_view line, const std::string& why) {
  throw ProtocolError(std::string("invalid ") + what + " (" + why + "): '" + std::string(line) + "'");
}

}  // namespace

std::string encode_handshake(const Handshake& h) {
  ordered_json j;
  j["protocol"] = "add-scorer";
  j["version"] = h.version;
  j["orientation"] = std::string(orientation_name(h.orientation));
  return j.dump();
}

std::string encode_request(const Request& r) {
  ordered_json j;
  j["id"] = r.id;
  j["audio_path"] = r.audio_path;
  return j.dump();
}

std::string encode_response(const Response& r) {
  ordered_json j;
  j["id"] = r.id.empty() ? ordered_json(nullptr) : ordered_json(r.id);
  if (r.score) {
    j["score"] = *r.score;
  } else {
    j["error"] = r.error.value_or("unknown error");
  }
  return j.dump();
}

Handshake decode_handshake(std::string_view line) {
  const ordered_json j = parse_object(line, "handshake");
  if (j.value("protocol", "") != "add-scorer") bad("handshake", line, "protocol must be add-scorer");
  if (!j.contains("version") || !j["version"].is_number_integer()) {
    bad("handshake", line, "missing integer version");
  }
  Handshake h;
  h.version = j["version"].get<int>();
  if (h.version != kVersion) bad("handshake", line, "unsupported version");
  if (!j.contains("orientation") || !j["orientation"].is_string()) {
    bad("handshake", line, "missing orientation");
  }
  h.orientation = parse_orientation(j["orientation"].get<std::string>());
  return h;
}

Request decode_request(std::string_view line) {
  const ordered_json j = parse_object(line, "request");
  if (!j.contains("id") || !j["id"].is_string()) bad("request", line, "missing string id");
  if (!j.contains("audio_path") || !j["audio_path"].is_string()) {
    bad("request", line, "missing string audio_path");
  }
  return {j["id"].get<std::string>(), j["audio_path"].get<std::string>()};
}

Response decode_response(std::string_view line) {
  const ordered_json j = parse_object(line, "response");
  Response r;
  if (j.contains("id") && j["id"].is_string()) {
    r.id = j["id"].get<std::string>();
  } else if (!(j.contains("id") && j["id"].is_null())) {
    bad("response", line, "missing id");
  }
  const bool has_score = j.contains("score");
  const bool has_error = j.contains("error");
  if (has_score == has_error) bad("response", line, "exactly one of score/error required");
  if (has_score) {
    if (!j["score"].is_number()) bad("response", line, "score is not a number");
    const double s = j["score"].get<double>();
    if (!(s >= 0.0 && s <= 1.0)) bad("response", line, "score outside [0, 1]");
    r.score = s;
  } else {
    if (!j["error"].is_string()) bad("response", line, "error is not a string");
    r.error = j["error"].get<std::string>();
  }
  return r;
}

}  // namespace protocol

// --- subprocess session ---------------------------------------------------------

namespace {

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { std::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

ExternalScorerSession::ExternalScorerSession(std::vector<std::string> argv, SessionOptions opts)
    : argv_(std::move(argv)), opts_(std::move(opts)) {
  if (argv_.empty()) throw ScorerUnavailable("scorer command is empty");
  if (opts_.temp_dir.empty()) opts_.temp_dir = std::filesystem::temp_directory_path();
  ignore_sigpipe_once();

  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw ScorerUnavailable("pipe failed");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw ScorerUnavailable("pipe failed");
  }

  std::vector<char*> cargv;
  for (auto& a : argv_) cargv.push_back(a.data());
  cargv.push_back(nullptr);

  pid_ = ::fork();
  if (pid_ < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw ScorerUnavailable("fork failed");
  }
  if (pid_ == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execvp(cargv[0], cargv.data());
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];

  try {
    const std::string line = read_line(opts_.handshake_timeout);
    orientation_ = protocol::decode_handshake(line).orientation;
  } catch (const ScorerUnavailable& e) {
    close();
    throw ScorerUnavailable("scorer '" + argv_.front() + "' unavailable: " + e.what());
  } catch (...) {
    close();
    throw;
  }
}

ExternalScorerSession::~ExternalScorerSession() { close(); }

void ExternalScorerSession::close() {
  if (to_child_ >= 0) {
    ::close(to_child_);
    to_child_ = -1;
  }
  if (from_child_ >= 0) {
    ::close(from_child_);
    from_child_ = -1;
  }
  if (pid_ > 0) {
    int status = 0;
    // Give a well-behaved child time to exit on end-of-input, then insist.
    for (int i = 0; i < 200; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) != 0) {
        pid_ = -1;
        return;
      }
      ::usleep(10'000);
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

std::string ExternalScorerSession::read_line(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (from_child_ < 0) throw ScorerUnavailable("session closed");
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw ScorerUnavailable("timed out waiting for scorer output");
    pollfd pfd{from_child_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw ScorerUnavailable(std::string("poll failed: ") + std::strerror(errno));
    }
    if (rc == 0) continue;
    char chunk[4096];
    const ssize_t got = ::read(from_child_, chunk, sizeof chunk);
    if (got < 0) {
      if (errno == EINTR) continue;
      throw ScorerUnavailable(std::string("read failed: ") + std::strerror(errno));
    }
    if (got == 0) throw ScorerUnavailable("scorer process closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(got));
  }
}

void ExternalScorerSession::write_line(const std::string& line) {
  if (to_child_ < 0) throw ScorerUnavailable("session closed");
  std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ScorerUnavailable(std::string("write to scorer failed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

protocol::Response ExternalScorerSession::request(const protocol::Request& req) {
  write_line(protocol::encode_request(req));
  const std::string line = read_line(opts_.response_timeout);
  protocol::Response resp = protocol::decode_response(line);
  if (resp.id != req.id) {
    throw ProtocolError("response id '" + resp.id + "' does not match request id '" + req.id +
                        "': '" + line + "'");
  }
  return resp;
}

ScoreOutcome ExternalScorerSession::score(const Waveform& audio, const std::string& id) {
  const auto path = opts_.temp_dir / ("vocxai-" + std::to_string(::getpid()) + "-" +
                                      std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "-" +
                                      std::to_string(temp_counter_++) + ".wav");
  struct Cleanup {
    std::filesystem::path p;
    ~Cleanup() {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
  } cleanup{path};
  write_wav(path, audio, WavEncoding::float32);
  const protocol::Response resp = request({id, std::filesystem::absolute(path).string()});
  if (!resp.score) return {std::nullopt, resp.error.value_or("unknown error")};
  const double s = orientation_ == ScoreOrientation::bonafide_high ? 1.0 - *resp.score : *resp.score;
  return {s, {}};
}

std::unique_ptr<Scorer> open_scorer_session(std::vector<std::string> argv, SessionOptions opts) {
  return std::make_unique<ExternalScorerSession>(std::move(argv), std::move(opts));
}

}  // namespace vocxai
