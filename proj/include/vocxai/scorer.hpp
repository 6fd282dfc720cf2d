#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vocxai/spectral.hpp"
#include "vocxai/waveform.hpp"

namespace vocxai {

enum class ScoreOrientation { spoof_high, bonafide_high };

std::string_view orientation_name(ScoreOrientation o);
ScoreOrientation parse_orientation(std::string_view name);

// Result of scoring one waveform: a spoof probability in [0, 1] or an error.
struct ScoreOutcome {
  std::optional<double> score;
  std::string error;

  bool ok() const { return score.has_value(); }
};

// Black-box classifier: consumes a waveform, reports the spoof probability
// (1 = spoof). Instances are single-owner; use one per worker thread.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual ScoreOutcome score(const Waveform& audio, const std::string& id) = 0;
  // Score differences at or below this are treated as "no change".
  virtual double tolerance() const { return 1e-6; }
};

using ScorerFactory = std::function<std::unique_ptr<Scorer>()>;

// Mean squared STFT magnitude over bins whose centre frequency lies in
// [f_low_hz, f_high_hz]. Throws InvalidArgument if no bin qualifies or the
// band exceeds Nyquist.
double band_energy(const Waveform& x, double f_low_hz, double f_high_hz,
                   const StftConfig& cfg = {});

// clamp01(1 - band_energy / ref_energy): missing in-band energy reads as
// spoof evidence.
double dummy_band_energy_score(const Waveform& x, double f_low_hz, double f_high_hz,
                               double ref_energy, const StftConfig& cfg = {});

class BandEnergyScorer final : public Scorer {
 public:
  BandEnergyScorer(double f_low_hz, double f_high_hz, double ref_energy, StftConfig cfg = {});
  ScoreOutcome score(const Waveform& audio, const std::string& id) override;

 private:
  double f_low_hz_;
  double f_high_hz_;
  double ref_energy_;
  StftConfig cfg_;
};

// --- JSONL wire protocol ----------------------------------------------------
//
// The scorer process first prints
//   {"protocol":"add-scorer","version":1,"orientation":"spoof_high"}
// then answers each request line {"id":...,"audio_path":...} with exactly one
// line {"id":...,"score":x} or {"id":...,"error":"..."}. One compact JSON
// object per line, UTF-8, keys in the order shown.
namespace protocol {

inline constexpr int kVersion = 1;

struct Request {
  std::string id;
  std::string audio_path;
};

struct Response {
  std::string id;  // empty when the request could not be parsed
  std::optional<double> score;
  std::optional<std::string> error;
};

struct Handshake {
  int version = kVersion;
  ScoreOrientation orientation = ScoreOrientation::spoof_high;
};

std::string encode_handshake(const Handshake& h);
std::string encode_request(const Request& r);
std::string encode_response(const Response& r);

// All decoders throw ProtocolError quoting the offending line.
Handshake decode_handshake(std::string_view line);
Request decode_request(std::string_view line);
Response decode_response(std::string_view line);

}  // namespace protocol

struct SessionOptions {
  std::chrono::milliseconds handshake_timeout{30'000};
  std::chrono::milliseconds response_timeout{300'000};
  std::filesystem::path temp_dir;  // defaults to the system temp directory
};

// Scorer running as a child process that speaks the JSONL protocol over its
// standard input/output. Requests are strictly sequential.
class ExternalScorerSession final : public Scorer {
 public:
  // Spawns argv and waits for the handshake. Throws ScorerUnavailable if the
  // process cannot be started, exits, or stays silent past the timeout, and
  // ProtocolError for a malformed handshake.
  explicit ExternalScorerSession(std::vector<std::string> argv, SessionOptions opts = {});
  ~ExternalScorerSession() override;
  ExternalScorerSession(const ExternalScorerSession&) = delete;
  ExternalScorerSession& operator=(const ExternalScorerSession&) = delete;

  ScoreOrientation orientation() const { return orientation_; }

  // Raw protocol exchange; scores are returned as the process reports them.
  protocol::Response request(const protocol::Request& req);

  // Writes the audio to a temporary float32 WAV, requests a score and maps it
  // to spoof orientation.
  ScoreOutcome score(const Waveform& audio, const std::string& id) override;

  // Closes the child's input and reaps it. Idempotent.
  void close();

 private:
  std::string read_line(std::chrono::milliseconds timeout);
  void write_line(const std::string& line);

  std::vector<std::string> argv_;
  SessionOptions opts_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  ScoreOrientation orientation_ = ScoreOrientation::spoof_high;
  std::uint64_t temp_counter_ = 0;
};

std::unique_ptr<Scorer> open_scorer_session(std::vector<std::string> argv, SessionOptions opts = {});

}  // namespace vocxai
