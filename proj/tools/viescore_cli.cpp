// Command-line front end: rating runs, correlation studies, ranking
// comparisons, and the PQ-input ablation.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>

#include "viescore/runner.hpp"
#include "viescore/util.hpp"

namespace {

namespace fs = std::filesystem;
using namespace viescore;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitJoin = 3;
constexpr int kExitCacheMiss = 4;

MockConfig load_mock_latents(const std::string& path, int noise_level,
                             int extra_image_noise, std::uint64_t seed) {
    MockConfig mock;
    mock.noise_level = noise_level;
    mock.extra_image_noise = extra_image_noise;
    mock.seed = seed;
    nlohmann::json doc = nlohmann::json::parse(read_file_text(path));
    for (const auto& [id, entry] : doc.items()) {
        MockLatents latents;
        for (const auto& v : entry.at("sc")) latents.sc.push_back(v.get<double>());
        for (const auto& v : entry.at("pq")) latents.pq.push_back(v.get<double>());
        mock.hidden_quality_table[id] = std::move(latents);
    }
    return mock;
}

std::map<std::string, RunConfig::TaskExamples> load_icl_examples(
    const std::string& path) {
    std::map<std::string, RunConfig::TaskExamples> out;
    const fs::path base = fs::path(path).parent_path();
    nlohmann::json doc = nlohmann::json::parse(read_file_text(path));
    auto load_one = [&](const nlohmann::json& entry) {
        FewShotExample ex;
        for (const auto& p : entry.at("images"))
            ex.request_images.push_back(load_image((base / p.get<std::string>()).string()));
        ex.request_text = entry.at("text").get<std::string>();
        ex.exemplar_reply = entry.at("reply").get<std::string>();
        return ex;
    };
    for (const auto& [task, entry] : doc.items()) {
        RunConfig::TaskExamples pair;
        pair.sc = load_one(entry.at("sc"));
        pair.pq = load_one(entry.at("pq"));
        out[task] = std::move(pair);
    }
    return out;
}

struct CommonOpts {
    std::vector<std::string> manifests;
    std::string backend = "mock";
    std::string model;
    std::string endpoint;
    std::string api_key_env = "VIESCORE_API_KEY";
    std::string cache_dir;
    std::string templates = "assets/templates";
    std::string out = "out";
    std::string mock_latents;
    std::string icl_examples;
    int shots = 0;
    int mock_noise = 0;
    int mock_extra_image_noise = 0;
    int max_in_flight = 4;
    int retry_limit = 3;
    double timeout = 120.0;
    std::uint64_t seed = 0;
    bool pq_with_inputs = false;
    bool concat_images = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_backend) {
    cmd->add_option("--manifest", opts.manifests, "manifest file(s), one per task")
        ->required();
    cmd->add_option("--templates", opts.templates, "prompt template directory");
    cmd->add_option("--out", opts.out, "output directory");
    cmd->add_option("--seed", opts.seed, "run seed (recorded in outputs)");
    if (needs_backend) {
        cmd->add_option("--backend", opts.backend, "live | replay | mock")
            ->check(CLI::IsMember({"live", "replay", "mock"}));
        cmd->add_option("--model", opts.model, "backend model name");
        cmd->add_option("--endpoint", opts.endpoint, "live endpoint URL");
        cmd->add_option("--api-key-env", opts.api_key_env,
                        "environment variable holding the bearer token");
        cmd->add_option("--cache-dir", opts.cache_dir, "replay cache directory");
        cmd->add_option("--shots", opts.shots, "0 (zero-shot) or 1 (one-shot)")
            ->check(CLI::IsMember({0, 1}));
        cmd->add_option("--icl-examples", opts.icl_examples,
                        "JSON file with per-task one-shot examples");
        cmd->add_option("--mock-latents", opts.mock_latents,
                        "JSON latent quality table for the mock backend");
        cmd->add_option("--mock-noise", opts.mock_noise, "mock noise level");
        cmd->add_option("--mock-extra-image-noise", opts.mock_extra_image_noise,
                        "extra mock noise per image beyond the first");
        cmd->add_option("--max-in-flight", opts.max_in_flight,
                        "bounded request concurrency");
        cmd->add_option("--retry-limit", opts.retry_limit, "transient retry budget");
        cmd->add_option("--timeout", opts.timeout, "request timeout in seconds");
        cmd->add_flag("--concat-images", opts.concat_images,
                      "merge request images horizontally for single-image backends");
    }
}

RunConfig to_run_config(const CommonOpts& opts) {
    RunConfig config;
    config.manifest_paths = opts.manifests;
    config.templates_dir = opts.templates;
    config.output_dir = opts.out;
    config.seed = opts.seed;
    config.shot_mode = opts.shots == 1 ? ShotMode::OneShot : ShotMode::ZeroShot;
    config.pq_with_inputs = opts.pq_with_inputs;
    config.concat_for_single_image_backend = opts.concat_images;

    BackendConfig& backend = config.backend;
    if (opts.backend == "live")
        backend.kind = BackendKind::LiveHttp;
    else if (opts.backend == "replay")
        backend.kind = BackendKind::Replay;
    else
        backend.kind = BackendKind::SyntheticMock;
    if (!opts.model.empty()) backend.model_name = opts.model;
    backend.endpoint_url = opts.endpoint;
    backend.api_key_env = opts.api_key_env;
    backend.cache_dir = opts.cache_dir;
    backend.max_in_flight = opts.max_in_flight;
    backend.retry_limit = opts.retry_limit;
    backend.timeout_seconds = opts.timeout;
    if (backend.kind == BackendKind::SyntheticMock) {
        if (opts.mock_latents.empty())
            throw ConfigError("mock backend requires --mock-latents");
        backend.mock = load_mock_latents(opts.mock_latents, opts.mock_noise,
                                         opts.mock_extra_image_noise, opts.seed);
    }
    if (config.shot_mode == ShotMode::OneShot) {
        if (opts.icl_examples.empty())
            throw ConfigError("--shots 1 requires --icl-examples");
        config.examples_by_task = load_icl_examples(opts.icl_examples);
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"VIEScore evaluation harness"};
    app.require_subcommand(1);

    CommonOpts rate_opts;
    CLI::App* rate = app.add_subcommand("rate", "dispatch, parse, and score a manifest");
    add_common(rate, rate_opts, true);
    rate->add_flag("--pq-with-inputs", rate_opts.pq_with_inputs,
                   "include condition images in the PQ prompt (ablation arm)");

    CommonOpts corr_opts;
    std::vector<std::string> score_tables;
    std::vector<std::string> baselines;
    CLI::App* correlate =
        app.add_subcommand("correlate", "correlation reports from score tables");
    add_common(correlate, corr_opts, false);
    correlate->add_option("--scores", score_tables, "score table file(s)")->required();
    correlate->add_option("--baseline", baselines,
                          "precomputed baseline metric score file(s)");
    correlate->add_option("--method", corr_opts.model,
                          "method label recorded in the reports");

    CommonOpts rank_opts;
    std::vector<std::string> rank_tables;
    CLI::App* rank = app.add_subcommand("rank", "model ranking comparison");
    add_common(rank, rank_opts, false);
    rank->add_option("--scores", rank_tables, "score table file(s)")->required();

    CommonOpts ablate_opts;
    CLI::App* ablate =
        app.add_subcommand("ablate-pq", "paired PQ run with and without inputs");
    add_common(ablate, ablate_opts, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (rate->parsed()) {
            RunConfig config = to_run_config(rate_opts);
            auto results = run_rate(config);
            std::size_t scored = 0, total = 0;
            for (const auto& result : results) {
                for (const auto& row : result.rows) {
                    ++total;
                    if (row.score) ++scored;
                }
                std::cout << "wrote " << result.score_table_path << "\n";
            }
            std::cout << "scored " << scored << "/" << total << " instances\n";
        } else if (correlate->parsed()) {
            std::map<std::string, std::string> meta = {
                {"seed", std::to_string(corr_opts.seed)},
                {"backend_model", corr_opts.model.empty() ? "viescore" : corr_opts.model},
            };
            auto result = run_correlate(score_tables, corr_opts.manifests, baselines,
                                        corr_opts.out, meta);
            std::cout << "wrote reports for " << result.mh_reports.size()
                      << " task(s) under " << corr_opts.out << "/reports\n";
        } else if (rank->parsed()) {
            std::map<std::string, std::string> meta = {
                {"seed", std::to_string(rank_opts.seed)}};
            auto comparisons =
                run_rank(rank_tables, rank_opts.manifests, rank_opts.out, meta);
            for (const auto& cmp : comparisons)
                std::cout << cmp.task << ": d_SF=" << cmp.footrule_distance
                          << " rho=" << cmp.rho << "\n";
        } else if (ablate->parsed()) {
            RunConfig config = to_run_config(ablate_opts);
            auto results = run_ablate_pq(config);
            for (const auto& res : results) {
                auto fmt = [](const std::optional<double>& v) {
                    return v ? std::to_string(*v) : std::string("undefined");
                };
                std::cout << res.task
                          << ": without_inputs=" << fmt(res.pq_without_inputs)
                          << " with_inputs=" << fmt(res.pq_with_inputs) << "\n";
            }
        }
    } catch (const CacheMiss& e) {
        std::cerr << "cache miss: " << e.what() << "\n";
        return kExitCacheMiss;
    } catch (const JoinError& e) {
        std::cerr << "join error: " << e.what() << "\n";
        return kExitJoin;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DatasetError& e) {
        std::cerr << "dataset error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PromptError& e) {
        std::cerr << "prompt error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}
