#pragma once

// Synthetic dataset builders shared by the integration and acceptance tests:
// they write manifest files, per-instance images, and matching mock latent
// tables into a scratch directory.

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "viescore/backend.hpp"
#include "viescore/image.hpp"
#include "viescore/task.hpp"
#include "viescore/util.hpp"

namespace fixtures {

namespace fs = std::filesystem;

/// Rater triples whose mean is exactly level/6 for level in 0..6.
inline std::array<double, 3> triple_for_level(int level) {
    static const std::array<std::array<double, 3>, 7> kTriples = {{
        {0.0, 0.0, 0.0},
        {0.0, 0.0, 0.5},
        {0.0, 0.5, 0.5},
        {0.5, 0.5, 0.5},
        {0.5, 0.5, 1.0},
        {0.5, 1.0, 1.0},
        {1.0, 1.0, 1.0},
    }};
    return kTriples[static_cast<std::size_t>(level)];
}

/// Uniform double in [0, 10) from a splitmix64 stream.
inline double uniform10(std::uint64_t& state) {
    return 10.0 * (static_cast<double>(viescore::splitmix64(state) >> 11) /
                   9007199254740992.0);  // 2^53
}

enum class LatentDesign {
    Grid,       // latents follow a 7-level grid; metric and human orderings agree
    Continuous  // latents uniform on [0,10]; human side snapped to the rating grid
};

struct FixtureOptions {
    viescore::TaskKind task = viescore::TaskKind::TextGuidedGeneration;
    std::vector<std::string> models = {"model-a", "model-b", "model-c"};
    int instances_per_model = 7;
    std::uint64_t seed = 1;
    LatentDesign design = LatentDesign::Grid;
    std::string id_prefix = "inst";
};

struct Fixture {
    std::string manifest_path;
    std::map<std::string, viescore::MockLatents> latents;
    std::vector<std::string> instance_ids;
};

/// Writes <dir>/manifest.jsonl plus one unique synthetic image per instance
/// (and a shared condition image when the task needs them). Returns the mock
/// latent table consistent with the embedded human ratings.
inline Fixture write_fixture(const fs::path& dir, const FixtureOptions& opts) {
    using namespace viescore;
    fs::create_directories(dir / "img");

    const int sc_arity = sub_score_arity(opts.task, AspectKind::SC);
    const int cond_count = condition_image_count(opts.task);
    const std::string cond_key(placeholder_key(opts.task));

    std::vector<std::string> cond_files;
    for (int c = 0; c < cond_count; ++c) {
        std::string name = "img/cond" + std::to_string(c) + ".png";
        write_file_bytes((dir / name).string(),
                         make_solid_png(8, 8, 10, static_cast<std::uint8_t>(40 + c), 10).bytes);
        cond_files.push_back(name);
    }

    Fixture fixture;
    std::string body;
    {
        nlohmann::json header = {{"format_version", 1},
                                 {"task", std::string(task_name(opts.task))},
                                 {"source_note", "synthetic test fixture"}};
        body += header.dump();
        body += '\n';
    }

    std::uint64_t state =
        fnv1a64("fixture|" + std::string(task_name(opts.task))) ^ opts.seed;
    int serial = 0;
    for (const std::string& model : opts.models) {
        for (int i = 0; i < opts.instances_per_model; ++i, ++serial) {
            const std::string id =
                opts.id_prefix + "-" + model + "-" + std::to_string(i);
            fixture.instance_ids.push_back(id);

            MockLatents latents;
            std::array<double, 3> sc_triple{}, pq_triple{};
            if (opts.design == LatentDesign::Grid) {
                const int level = i % 7;
                latents.sc.assign(static_cast<std::size_t>(sc_arity),
                                  static_cast<double>(level + 2));
                latents.pq = {static_cast<double>(level + 2),
                              static_cast<double>(level + 2)};
                sc_triple = triple_for_level(level);
                pq_triple = triple_for_level(level);
            } else {
                double sc_min = 10.0;
                for (int j = 0; j < sc_arity; ++j) {
                    latents.sc.push_back(uniform10(state));
                    sc_min = std::min(sc_min, latents.sc.back());
                }
                latents.pq = {uniform10(state), uniform10(state)};
                const double pq_min = std::min(latents.pq[0], latents.pq[1]);
                sc_triple = triple_for_level(
                    static_cast<int>(std::lround(6.0 * sc_min / 10.0)));
                pq_triple = triple_for_level(
                    static_cast<int>(std::lround(6.0 * pq_min / 10.0)));
            }
            fixture.latents[id] = latents;

            // A unique image per instance keeps request fingerprints distinct.
            const std::string img = "img/s" + std::to_string(serial) + ".png";
            write_file_bytes(
                (dir / img).string(),
                make_solid_png(8, 8, static_cast<std::uint8_t>(serial % 256),
                               static_cast<std::uint8_t>(serial / 256), 200)
                    .bytes);

            nlohmann::json rec = {
                {"instance_id", id},
                {"model", model},
                {"conditions", {{cond_key, "condition text for " + id}}},
                {"condition_images", cond_files},
                {"synthetic_image", img},
                {"human",
                 {{"sc", {sc_triple[0], sc_triple[1], sc_triple[2]}},
                  {"pq", {pq_triple[0], pq_triple[1], pq_triple[2]}}}},
            };
            body += rec.dump();
            body += '\n';
        }
    }

    fixture.manifest_path = (dir / "manifest.jsonl").string();
    write_file_text(fixture.manifest_path, body);
    return fixture;
}

/// Fresh empty scratch directory under the build tree.
inline fs::path scratch_dir(const std::string& name) {
    fs::path dir = fs::path(TEST_TMP_DIR) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace fixtures
