#include "viescore/backend.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <thread>

#include "viescore/util.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

namespace viescore {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view reply_status_name(ReplyStatus status) {
    switch (status) {
        case ReplyStatus::Ok: return "ok";
        case ReplyStatus::Refused: return "refused";
        case ReplyStatus::TransportError: return "transport_error";
        case ReplyStatus::RateLimited: return "rate_limited";
        case ReplyStatus::Timeout: return "timeout";
    }
    return "unknown";
}

void BackendConfig::validate() const {
    if (max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
    if (timeout_seconds <= 0.0) throw ConfigError("timeout must be positive");
    if (retry_limit < 0) throw ConfigError("retry_limit must be non-negative");
    if (kind == BackendKind::LiveHttp) {
        if (endpoint_url.empty()) throw ConfigError("LiveHttp requires endpoint_url");
        if (api_key_env.empty()) throw ConfigError("LiveHttp requires api_key_env");
    }
    if (kind == BackendKind::Replay && cache_dir.empty())
        throw ConfigError("Replay requires cache_dir");
}

std::string request_fingerprint(const EvalRequest& request,
                                const std::string& model_name) {
    // Length-prefixed concatenation keeps field boundaries unambiguous.
    std::string buffer;
    auto append = [&buffer](std::string_view field) {
        buffer += std::to_string(field.size());
        buffer += ':';
        buffer.append(field.data(), field.size());
    };
    append(model_name);
    append(request.text);
    for (const ImageData& img : request.images) {
        append(img.media_type);
        append(std::string_view(reinterpret_cast<const char*>(img.bytes.data()),
                                img.bytes.size()));
    }
    return sha256_hex(buffer);
}

bool detect_refusal(const std::string& text, const std::vector<std::string>& keywords) {
    std::string lowered(text.size(), '\0');
    std::transform(text.begin(), text.end(), lowered.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    for (const std::string& kw : keywords) {
        std::string k(kw.size(), '\0');
        std::transform(kw.begin(), kw.end(), k.begin(), [](unsigned char c) {
            return static_cast<char>(std::tolower(c));
        });
        if (lowered.find(k) != std::string::npos) return true;
    }
    return false;
}

ReplayCache::ReplayCache(std::string dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
}

std::string ReplayCache::reply_path(const std::string& fingerprint) const {
    return (fs::path(dir_) / fingerprint.substr(0, 2) / (fingerprint + ".reply"))
        .string();
}

std::optional<std::string> ReplayCache::lookup(const std::string& fingerprint) const {
    std::lock_guard lock(mutex_);
    const std::string path = reply_path(fingerprint);
    if (!fs::exists(path)) return std::nullopt;
    return read_file_text(path);
}

void ReplayCache::store(const std::string& fingerprint, const std::string& reply,
                        const std::string& model_name, std::int64_t latency_ms) {
    std::lock_guard lock(mutex_);
    const fs::path shard = fs::path(dir_) / fingerprint.substr(0, 2);
    fs::create_directories(shard);
    write_file_text((shard / (fingerprint + ".reply")).string(), reply);
    json meta = {
        {"model_name", model_name},
        {"timestamp",
         std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
             .count()},
        {"latency_ms", latency_ms},
    };
    write_file_text((shard / (fingerprint + ".meta")).string(), meta.dump(2) + "\n");
}

std::string synthetic_mock_reply(const EvalRequest& request, const MockConfig& mock) {
    auto it = mock.hidden_quality_table.find(request.instance_id);
    if (it == mock.hidden_quality_table.end())
        throw UnknownInstance("no mock latents for instance " + request.instance_id);
    const std::vector<double>& latents =
        request.aspect == AspectKind::SC ? it->second.sc : it->second.pq;
    if (static_cast<int>(latents.size()) != request.expected_arity)
        throw UnknownInstance("mock latent arity mismatch for " + request.instance_id);

    const int extra_images = std::max(0, static_cast<int>(request.images.size()) - 1);
    const int noise = mock.noise_level + mock.extra_image_noise * extra_images;

    json scores = json::array();
    for (std::size_t j = 0; j < latents.size(); ++j) {
        double value = latents[j];
        if (noise > 0) {
            std::string key = std::to_string(mock.seed);
            key += '|';
            key += request.instance_id;
            key += '|';
            key += aspect_name(request.aspect);
            key += '|';
            key += std::to_string(j);
            key += '|';
            key += std::to_string(noise);
            std::uint64_t state = fnv1a64(key);
            const int eta =
                static_cast<int>(uniform_below(state, 2 * static_cast<std::uint64_t>(noise) + 1)) -
                noise;
            value += eta;
        }
        value = std::clamp(std::round(value), 0.0, 10.0);
        scores.push_back(static_cast<int>(value));
    }
    json reply = {{"score", scores},
                  {"reasoning", "Synthetic backend rating from latent quality."}};
    return reply.dump();
}

namespace {

class MockBackend final : public Backend {
  public:
    explicit MockBackend(BackendConfig cfg) : cfg_(std::move(cfg)) {
        if (!cfg_.cache_dir.empty()) cache_.emplace(cfg_.cache_dir);
    }

    RawReply send(const EvalRequest& request) override {
        RawReply reply;
        reply.instance_id = request.instance_id;
        reply.aspect = request.aspect;
        reply.request_fingerprint = request_fingerprint(request, cfg_.model_name);
        reply.text = synthetic_mock_reply(request, cfg_.mock);
        reply.status = detect_refusal(reply.text, cfg_.refusal_keywords)
                           ? ReplyStatus::Refused
                           : ReplyStatus::Ok;
        if (cache_ && reply.status == ReplyStatus::Ok)
            cache_->store(reply.request_fingerprint, reply.text, cfg_.model_name, 0);
        return reply;
    }

  private:
    BackendConfig cfg_;
    std::optional<ReplayCache> cache_;
};

class ReplayBackend final : public Backend {
  public:
    explicit ReplayBackend(BackendConfig cfg)
        : cfg_(std::move(cfg)), cache_(cfg_.cache_dir) {}

    RawReply send(const EvalRequest& request) override {
        RawReply reply;
        reply.instance_id = request.instance_id;
        reply.aspect = request.aspect;
        reply.request_fingerprint = request_fingerprint(request, cfg_.model_name);
        auto cached = cache_.lookup(reply.request_fingerprint);
        if (!cached)
            throw CacheMiss("replay cache has no entry for fingerprint " +
                            reply.request_fingerprint + " (instance " +
                            request.instance_id + ")");
        reply.text = *cached;
        reply.status = detect_refusal(reply.text, cfg_.refusal_keywords)
                           ? ReplyStatus::Refused
                           : ReplyStatus::Ok;
        return reply;
    }

  private:
    BackendConfig cfg_;
    ReplayCache cache_;
};

class LiveHttpBackend final : public Backend {
  public:
    explicit LiveHttpBackend(BackendConfig cfg) : cfg_(std::move(cfg)) {
        const char* key = std::getenv(cfg_.api_key_env.c_str());
        if (!key || !*key)
            throw AuthError("environment variable " + cfg_.api_key_env + " is not set");
        api_key_ = key;
        if (!cfg_.cache_dir.empty()) cache_.emplace(cfg_.cache_dir);
    }

    RawReply send(const EvalRequest& request) override {
        RawReply reply;
        reply.instance_id = request.instance_id;
        reply.aspect = request.aspect;
        reply.request_fingerprint = request_fingerprint(request, cfg_.model_name);

        const std::string body = build_body(request);
        const auto started = std::chrono::steady_clock::now();

        ReplyStatus last_status = ReplyStatus::TransportError;
        for (int attempt = 0; attempt <= cfg_.retry_limit; ++attempt) {
            if (attempt > 0) backoff(attempt);
            auto outcome = post_once(body);
            if (outcome.first == ReplyStatus::Ok) {
                reply.text = outcome.second;
                reply.status = detect_refusal(reply.text, cfg_.refusal_keywords)
                                   ? ReplyStatus::Refused
                                   : ReplyStatus::Ok;
                reply.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                       std::chrono::steady_clock::now() - started)
                                       .count();
                if (cache_ && reply.status == ReplyStatus::Ok)
                    cache_->store(reply.request_fingerprint, reply.text,
                                  cfg_.model_name, reply.latency_ms);
                return reply;
            }
            last_status = outcome.first;
        }
        reply.status = last_status;
        reply.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - started)
                               .count();
        return reply;
    }

  private:
    std::string build_body(const EvalRequest& request) const {
        json content = json::array();
        content.push_back({{"type", "text"}, {"text", request.text}});
        for (const ImageData& img : request.images) {
            content.push_back({{"type", "image"},
                               {"media_type", img.media_type},
                               {"data", encode_image(img)}});
        }
        json body = {
            {"model", cfg_.model_name},
            {"messages", json::array({{{"role", "user"}, {"content", content}}})},
            {"max_tokens", 1024},
            {"temperature", 0},
        };
        return body.dump();
    }

    std::pair<ReplyStatus, std::string> post_once(const std::string& body) {
        auto [origin, path] = split_url(cfg_.endpoint_url);
        httplib::Client client(origin);
        client.set_connection_timeout(static_cast<time_t>(cfg_.timeout_seconds), 0);
        client.set_read_timeout(static_cast<time_t>(cfg_.timeout_seconds), 0);
        client.set_bearer_token_auth(api_key_);
        auto res = client.Post(path, body, "application/json");
        if (!res) {
            return {res.error() == httplib::Error::ConnectionTimeout ||
                            res.error() == httplib::Error::Read
                        ? ReplyStatus::Timeout
                        : ReplyStatus::TransportError,
                    {}};
        }
        if (res->status == 401 || res->status == 403)
            throw AuthError("endpoint rejected credentials (HTTP " +
                            std::to_string(res->status) + ")");
        if (res->status == 429) return {ReplyStatus::RateLimited, {}};
        if (res->status >= 500) return {ReplyStatus::TransportError, {}};
        if (res->status != 200) return {ReplyStatus::TransportError, {}};
        return {ReplyStatus::Ok, extract_text(res->body)};
    }

    static std::string extract_text(const std::string& body) {
        json doc = json::parse(body, nullptr, false);
        if (doc.is_discarded()) return body;
        // chat-completion style: choices[0].message.content, string or parts
        if (doc.contains("choices") && doc["choices"].is_array() &&
            !doc["choices"].empty()) {
            const json& msg = doc["choices"][0].value("message", json::object());
            const json& content = msg.value("content", json());
            if (content.is_string()) return content.get<std::string>();
            if (content.is_array()) {
                std::string out;
                for (const auto& part : content)
                    if (part.is_object() && part.value("type", "") == "text")
                        out += part.value("text", "");
                return out;
            }
        }
        return body;
    }

    static std::pair<std::string, std::string> split_url(const std::string& url) {
        const std::size_t scheme_end = url.find("://");
        if (scheme_end == std::string::npos)
            throw ConfigError("endpoint_url must include a scheme: " + url);
        const std::size_t path_start = url.find('/', scheme_end + 3);
        if (path_start == std::string::npos) return {url, "/"};
        return {url.substr(0, path_start), url.substr(path_start)};
    }

    void backoff(int attempt) {
        // 1s initial, doubling, full jitter
        const double cap = 1000.0 * std::pow(2.0, attempt - 1);
        std::uniform_real_distribution<double> dist(0.0, cap);
        std::this_thread::sleep_for(
            std::chrono::milliseconds(static_cast<std::int64_t>(dist(rng_))));
    }

    BackendConfig cfg_;
    std::string api_key_;
    std::optional<ReplayCache> cache_;
    std::mt19937_64 rng_{std::random_device{}()};
};

}  // namespace

std::unique_ptr<Backend> Backend::create(const BackendConfig& cfg) {
    cfg.validate();
    switch (cfg.kind) {
        case BackendKind::LiveHttp: return std::make_unique<LiveHttpBackend>(cfg);
        case BackendKind::Replay: return std::make_unique<ReplayBackend>(cfg);
        case BackendKind::SyntheticMock: return std::make_unique<MockBackend>(cfg);
    }
    throw ConfigError("unknown backend kind");
}

}  // namespace viescore
