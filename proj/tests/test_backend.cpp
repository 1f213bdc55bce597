#include <doctest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "viescore/backend.hpp"
#include "viescore/parser.hpp"
#include "viescore/util.hpp"

using namespace viescore;
namespace fs = std::filesystem;

namespace {

EvalRequest make_request(const std::string& id, AspectKind aspect, int arity,
                         int image_count = 1) {
    EvalRequest request;
    request.instance_id = id;
    request.aspect = aspect;
    request.text = "prompt text for " + id;
    request.expected_arity = arity;
    for (int i = 0; i < image_count; ++i)
        request.images.push_back(
            make_solid_png(4, 4, static_cast<std::uint8_t>(i * 40), 7, 7));
    return request;
}

}  // namespace

TEST_CASE("refusal keyword matching is a case-insensitive substring test") {
    CHECK(detect_refusal(
        "I am sorry, but I cannot process these images as they contain real people."));
    CHECK_FALSE(detect_refusal("{\"score\":[8,9],\"reasoning\":\"ok\"}"));
    CHECK(detect_refusal("I cannot PROCESS these images"));
    CHECK_FALSE(detect_refusal("processing went fine", {"cannot process"}));
    CHECK(detect_refusal("we CANNOT PROCESS that", {"cannot process"}));
}

TEST_CASE("encode_image pins the golden 1x1 PNG and is pure") {
    ImageData golden = load_image((fs::path(TEST_DATA_DIR) / "black1x1.png").string());
    const std::string expected =
        "iVBORw0KGgoAAAANSUhEUgAAAAEAAAABCAIAAACQd1PeAAAADElEQVR42mNgYGAAAAAEAAHI6u"
        "v5AAAAAElFTkSuQmCC";
    CHECK(encode_image(golden) == expected);
    CHECK(encode_image(golden) == encode_image(golden));
    CHECK_THROWS_AS(image_from_bytes({}), DecodeError);
}

TEST_CASE("request fingerprints track content, not configuration") {
    EvalRequest request = make_request("u1", AspectKind::SC, 2);
    const std::string fp = request_fingerprint(request, "model-x");
    CHECK(fp == request_fingerprint(request, "model-x"));  // stable
    CHECK(fp.size() == 64);

    EvalRequest other_text = request;
    other_text.text += "!";
    CHECK(request_fingerprint(other_text, "model-x") != fp);

    EvalRequest other_image = request;
    other_image.images[0].bytes[20] ^= 1;
    CHECK(request_fingerprint(other_image, "model-x") != fp);

    CHECK(request_fingerprint(request, "model-y") != fp);

    // unrelated config fields are not part of the fingerprint by construction;
    // shot mode and arity only matter through the text they produce
    EvalRequest other_arity = request;
    other_arity.expected_arity = 3;
    CHECK(request_fingerprint(other_arity, "model-x") == fp);
}

TEST_CASE("replay cache round-trips replies under the sharded layout") {
    const fs::path dir = fixtures::scratch_dir("cache_roundtrip");
    ReplayCache cache(dir.string());
    const std::string fp(64, 'a');
    CHECK_FALSE(cache.lookup(fp).has_value());
    cache.store(fp, "stored reply", "model-x", 12);
    REQUIRE(cache.lookup(fp).has_value());
    CHECK(*cache.lookup(fp) == "stored reply");
    CHECK(fs::exists(dir / "aa" / (fp + ".reply")));
    const std::string meta = read_file_text((dir / "aa" / (fp + ".meta")).string());
    CHECK(meta.find("model-x") != std::string::npos);
}

TEST_CASE("config validation rejects malformed settings") {
    BackendConfig cfg;
    cfg.kind = BackendKind::SyntheticMock;
    cfg.max_in_flight = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.max_in_flight = 2;
    cfg.timeout_seconds = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.timeout_seconds = 5;
    cfg.validate();

    BackendConfig live;
    live.kind = BackendKind::LiveHttp;
    CHECK_THROWS_AS(live.validate(), ConfigError);  // endpoint and key env missing
    live.endpoint_url = "https://example.invalid/v1/chat";
    live.api_key_env = "";
    CHECK_THROWS_AS(live.validate(), ConfigError);

    BackendConfig replay;
    replay.kind = BackendKind::Replay;
    CHECK_THROWS_AS(replay.validate(), ConfigError);  // cache_dir missing
}

TEST_CASE("synthetic mock emits latents verbatim at zero noise") {
    MockConfig mock;
    mock.hidden_quality_table["u1"] = {{7}, {7, 5}};
    EvalRequest pq = make_request("u1", AspectKind::PQ, 2);

    const std::string reply = synthetic_mock_reply(pq, mock);
    auto parsed = parse_scores(reply, 2);
    REQUIRE(parsed.ok());
    CHECK(parsed.sub_scores == std::vector<double>{7, 5});
    CHECK(synthetic_mock_reply(pq, mock) == reply);  // determinism

    CHECK_THROWS_AS(synthetic_mock_reply(make_request("nope", AspectKind::SC, 1), mock),
                    UnknownInstance);
}

TEST_CASE("synthetic mock noise is seeded, bounded, and image-count sensitive") {
    MockConfig mock;
    mock.hidden_quality_table["u1"] = {{5}, {5, 5}};
    mock.noise_level = 2;
    mock.seed = 3;
    EvalRequest request = make_request("u1", AspectKind::SC, 1);

    auto first = parse_scores(synthetic_mock_reply(request, mock), 1);
    auto second = parse_scores(synthetic_mock_reply(request, mock), 1);
    REQUIRE(first.ok());
    CHECK(first.sub_scores == second.sub_scores);
    CHECK(std::abs(first.sub_scores[0] - 5.0) <= 2.0);

    // extra_image_noise widens the band only when extra images are attached
    MockConfig sensitive = mock;
    sensitive.noise_level = 0;
    sensitive.extra_image_noise = 3;
    auto one_image = parse_scores(synthetic_mock_reply(request, sensitive), 1);
    REQUIRE(one_image.ok());
    CHECK(one_image.sub_scores[0] == 5.0);  // single image: no noise at all
    EvalRequest two_images = make_request("u1", AspectKind::SC, 1, 2);
    auto noisy = parse_scores(synthetic_mock_reply(two_images, sensitive), 1);
    REQUIRE(noisy.ok());
    CHECK(std::abs(noisy.sub_scores[0] - 5.0) <= 3.0);
}

TEST_CASE("mock backend serves and populates the replay cache") {
    const fs::path dir = fixtures::scratch_dir("cache_mock");
    BackendConfig cfg;
    cfg.kind = BackendKind::SyntheticMock;
    cfg.cache_dir = dir.string();
    cfg.mock.hidden_quality_table["u1"] = {{6}, {4, 9}};
    auto mock = Backend::create(cfg);

    EvalRequest request = make_request("u1", AspectKind::SC, 1);
    RawReply reply = mock->send(request);
    CHECK(reply.status == ReplyStatus::Ok);
    CHECK(reply.request_fingerprint == request_fingerprint(request, cfg.model_name));

    // the very same request replays bit-identically from the cache
    BackendConfig replay_cfg;
    replay_cfg.kind = BackendKind::Replay;
    replay_cfg.cache_dir = dir.string();
    replay_cfg.model_name = cfg.model_name;
    auto replay = Backend::create(replay_cfg);
    RawReply replayed = replay->send(request);
    CHECK(replayed.status == ReplyStatus::Ok);
    CHECK(replayed.text == reply.text);

    // unseen requests are a hard cache miss
    CHECK_THROWS_AS(replay->send(make_request("u1", AspectKind::SC, 1, 2)), CacheMiss);
}

TEST_CASE("replayed refusals surface as Refused, keeping them off the score path") {
    const fs::path dir = fixtures::scratch_dir("cache_refusal");
    BackendConfig cfg;
    cfg.kind = BackendKind::Replay;
    cfg.cache_dir = dir.string();
    EvalRequest request = make_request("u9", AspectKind::PQ, 2);
    ReplayCache cache(dir.string());
    cache.store(request_fingerprint(request, cfg.model_name),
                "I am sorry, but I cannot process these images.", cfg.model_name, 0);
    auto backend = Backend::create(cfg);
    CHECK(backend->send(request).status == ReplyStatus::Refused);
}
