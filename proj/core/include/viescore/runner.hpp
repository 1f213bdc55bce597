#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "viescore/backend.hpp"
#include "viescore/dataset.hpp"
#include "viescore/prompt.hpp"
#include "viescore/scoring.hpp"
#include "viescore/stats.hpp"

namespace viescore {

struct JoinError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TooFewModels : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::vector<std::string> manifest_paths;
    BackendConfig backend;
    ShotMode shot_mode = ShotMode::ZeroShot;
    bool pq_with_inputs = false;  // Table-style ablation arm off by default
    bool concat_for_single_image_backend = false;
    std::uint64_t seed = 0;
    std::string output_dir;
    std::string templates_dir;
    /// One-shot examples, per task and aspect; required when shot_mode is
    /// OneShot. Examples must come from the same task they illustrate.
    struct TaskExamples {
        FewShotExample sc;
        FewShotExample pq;
    };
    std::map<std::string, TaskExamples> examples_by_task;  // keyed by task_name
};

/// One scored (or dropped/failed) instance of a rating run.
struct ScoreRow {
    std::string instance_id;
    std::string model_name;
    std::string task;
    std::optional<InstanceScore> score;  // empty for dropped/failed instances
    std::string failure;                 // "", "dropped", or a transport status
};

struct RateResult {
    std::vector<ScoreRow> rows;  // sorted by instance_id
    std::string score_table_path;
};

/// Assembles, dispatches, parses, and scores every instance of every
/// manifest; writes scores/<task>.tsv, run metadata, and (live/mock) the
/// replay cache. Per-instance failures are recorded in rows, never fatal.
std::vector<RateResult> run_rate(const RunConfig& config);

/// Serialized score table I/O (tab-separated, deterministic formatting).
void write_score_table(const std::string& path, const std::vector<ScoreRow>& rows,
                       const std::map<std::string, std::string>& run_meta);
std::vector<ScoreRow> load_score_table(const std::string& path);

struct CorrelateResult {
    std::vector<CorrelationReport> mh_reports;        // one per task
    std::vector<CorrelationReport> hh_reports;        // one per task
    std::vector<CorrelationReport> baseline_reports;  // one per (metric, task)
    CorrelationCell mh_all_tasks;
    CorrelationCell hh_all_tasks;
};

/// Joins score tables onto manifests and emits the correlation report files.
CorrelateResult run_correlate(const std::vector<std::string>& score_table_paths,
                              const std::vector<std::string>& manifest_paths,
                              const std::vector<std::string>& baseline_paths,
                              const std::string& output_dir,
                              const std::map<std::string, std::string>& run_meta);

/// Ranks models by mean normalized Overall on both sides and compares.
std::vector<RankingComparison> run_rank(const std::vector<std::string>& score_table_paths,
                                        const std::vector<std::string>& manifest_paths,
                                        const std::string& output_dir,
                                        const std::map<std::string, std::string>& run_meta);

struct AblateResult {
    std::string task;
    std::optional<double> pq_without_inputs;  // task-level PQ correlation
    std::optional<double> pq_with_inputs;
};

/// Runs the PQ aspect both with and without condition images against the
/// same backend and reports the paired task-level PQ correlations.
std::vector<AblateResult> run_ablate_pq(const RunConfig& config);

/// Metadata block every output file embeds (seed, checksums, backend, shots).
std::map<std::string, std::string> build_run_meta(const RunConfig& config,
                                                  const TemplateSet& templates);

}  // namespace viescore
