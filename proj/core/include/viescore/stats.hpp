#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace viescore {

struct StatsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct LengthMismatch : StatsError {
    using StatsError::StatsError;
};
struct EmptyList : StatsError {
    using StatsError::StatsError;
};
struct SetMismatch : StatsError {
    using StatsError::StatsError;
};
struct InsufficientOverlap : StatsError {
    using StatsError::StatsError;
};

/// Fractional (mid) ranks, 1-based; ties receive average ranks.
std::vector<double> fractional_ranks(const std::vector<double>& values);

/// Correlations return nullopt when a side is constant (undefined value,
/// excluded from Fisher-Z averaging downstream).
std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y);
std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y);
/// Tie-corrected Kendall tau-b.
std::optional<double> kendall(const std::vector<double>& x, const std::vector<double>& y);

/// tanh(mean(atanh(r))) with |r| clamped to 1 - 1e-7 before atanh.
double fisher_z_mean(const std::vector<double>& correlations);

/// Sum of absolute rank displacements between two orderings of one model set.
int footrule(const std::vector<std::string>& r, const std::vector<std::string>& r_star);

/// Spearman over the two rank vectors of the orderings.
double ranking_rho(const std::vector<std::string>& r,
                   const std::vector<std::string>& r_star);

/// Interval-level Krippendorff's alpha over a rater x unit matrix with
/// missing entries.
double krippendorff_alpha(
    const std::vector<std::vector<std::optional<double>>>& ratings_by_rater);

struct CorrelationCell {
    std::optional<double> sc;
    std::optional<double> pq;
    std::optional<double> overall;
    int n = 0;  // instances (per-model cells) or contributing models/tasks
};

/// Per-model and Fisher-Z-aggregated metric-to-human correlations for one task.
struct CorrelationReport {
    std::string task;
    std::string method;  // backend or baseline metric name
    std::map<std::string, CorrelationCell> per_model;
    CorrelationCell task_level;
};

/// One joined (metric, human) instance for the M-H pipeline.
struct MhInput {
    std::string instance_id;
    std::string model_name;
    double metric_sc = 0.0;
    double metric_pq = 0.0;
    double metric_overall = 0.0;
    double human_sc = 0.0;
    double human_pq = 0.0;
    double human_overall = 0.0;
};

CorrelationReport mh_pipeline(const std::string& task, const std::string& method,
                              const std::vector<MhInput>& rows);

/// Raw three-rater triples for the H-H pipeline.
struct HhInput {
    std::string instance_id;
    std::string model_name;
    std::array<double, 3> sc{};
    std::array<double, 3> pq{};
};

/// Per model: Fisher-Z mean of the three leave-one-out correlations
/// corr(rater_k, mean of the other two), per aspect.
CorrelationReport hh_pipeline(const std::string& task, const std::vector<HhInput>& rows);

/// Fisher-Z mean of task-level cells across task reports.
CorrelationCell all_task_summary(const std::vector<CorrelationReport>& reports);

/// Model ordering comparison against the human leaderboard.
struct RankingComparison {
    std::string task;
    std::vector<std::string> human_ranking;   // best first
    std::vector<std::string> method_ranking;  // best first
    int footrule_distance = 0;
    double rho = 0.0;
    bool tie_broken = false;  // a mean-score tie was broken lexicographically
};

}  // namespace viescore
