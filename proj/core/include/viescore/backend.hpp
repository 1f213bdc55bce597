#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "viescore/prompt.hpp"

namespace viescore {

struct BackendError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : BackendError {
    using BackendError::BackendError;
};
struct AuthError : BackendError {
    using BackendError::BackendError;
};
struct CacheMiss : BackendError {
    using BackendError::BackendError;
};
struct UnknownInstance : BackendError {
    using BackendError::BackendError;
};

enum class BackendKind { LiveHttp, Replay, SyntheticMock };

enum class ReplyStatus { Ok, Refused, TransportError, RateLimited, Timeout };

std::string_view reply_status_name(ReplyStatus status);

inline const std::vector<std::string> kDefaultRefusalKeywords = {
    "I am sorry, but I cannot",
    "cannot process these images",
};

/// Per-instance latent quality the synthetic mock rates from.
struct MockLatents {
    std::vector<double> sc;  // one latent per SC sub-score, in [0, 10]
    std::vector<double> pq;  // one latent per PQ sub-score, in [0, 10]
};

struct MockConfig {
    std::map<std::string, MockLatents> hidden_quality_table;
    int noise_level = 0;        // uniform integer noise in [-level, +level]
    int extra_image_noise = 0;  // added noise per image beyond the first
    std::uint64_t seed = 0;
};

struct BackendConfig {
    BackendKind kind = BackendKind::SyntheticMock;
    std::string endpoint_url;
    std::string model_name = "synthetic-mock";
    std::string api_key_env;
    int max_in_flight = 4;
    int retry_limit = 3;
    double timeout_seconds = 120.0;
    std::string cache_dir;  // replay source; live/mock append Ok replies here
    std::vector<std::string> refusal_keywords = kDefaultRefusalKeywords;
    MockConfig mock;

    void validate() const;  // throws ConfigError
};

struct RawReply {
    std::string instance_id;
    AspectKind aspect = AspectKind::SC;
    std::string text;
    ReplyStatus status = ReplyStatus::Ok;
    std::string request_fingerprint;
    std::int64_t latency_ms = 0;
};

/// Content hash of (prompt text, image bytes, model name); stable across runs.
std::string request_fingerprint(const EvalRequest& request, const std::string& model_name);

/// Case-insensitive substring match against the refusal keyword list.
bool detect_refusal(const std::string& text,
                    const std::vector<std::string>& keywords = kDefaultRefusalKeywords);

/// File-per-fingerprint reply store: cache/<first-2-hex>/<fingerprint>.reply
/// plus a .meta sidecar. Writes are serialized; identical fingerprints carry
/// identical content so rewrites are harmless.
class ReplayCache {
  public:
    explicit ReplayCache(std::string dir);

    std::optional<std::string> lookup(const std::string& fingerprint) const;
    void store(const std::string& fingerprint, const std::string& reply,
               const std::string& model_name, std::int64_t latency_ms);

    const std::string& dir() const { return dir_; }

  private:
    std::string reply_path(const std::string& fingerprint) const;
    std::string dir_;
    mutable std::mutex mutex_;
};

/// Deterministic well-formed reply derived from the latent quality table.
std::string synthetic_mock_reply(const EvalRequest& request, const MockConfig& mock);

class Backend {
  public:
    virtual ~Backend() = default;
    virtual RawReply send(const EvalRequest& request) = 0;

    /// Builds the backend named by cfg.kind. Throws ConfigError on bad config.
    static std::unique_ptr<Backend> create(const BackendConfig& cfg);
};

}  // namespace viescore
