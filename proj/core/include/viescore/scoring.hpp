#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "viescore/parser.hpp"

namespace viescore {

struct ScoringError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptySubScores : ScoringError {
    using ScoringError::ScoringError;
};
struct OutOfRange : ScoringError {
    using ScoringError::ScoringError;
};
struct InvalidRaterValue : ScoringError {
    using ScoringError::ScoringError;
};
struct DroppedInstance : ScoringError {
    using ScoringError::ScoringError;
};

/// sqrt(min(alpha) * min(beta)) on the 0..10 scale.
double overall_score(const std::vector<double>& alpha, const std::vector<double>& beta);

/// 0..10 value mapped to [0, 1].
double normalize(double v);

/// Mean of three rater picks from {0, 0.5, 1}.
double human_aggregate(const std::array<double, 3>& rater_values);

/// One instance's three-rater ground truth.
struct HumanRating {
    std::string instance_id;
    std::array<double, 3> rater_scores_sc{};
    std::array<double, 3> rater_scores_pq{};

    double sc_avg() const { return human_aggregate(rater_scores_sc); }
    double pq_avg() const { return human_aggregate(rater_scores_pq); }
    double overall() const;
};

/// Normalized SC/PQ/Overall of one instance plus its sub-scores and provenance.
struct InstanceScore {
    std::string instance_id;
    std::vector<double> alpha;  // SC sub-scores, 0..10
    std::vector<double> beta;   // PQ sub-scores, 0..10
    double sc = 0.0;            // min(alpha)/10
    double pq = 0.0;            // min(beta)/10
    double overall = 0.0;       // sqrt(sc * pq)
    ParseStatus sc_provenance = ParseStatus::Parsed;
    ParseStatus pq_provenance = ParseStatus::Parsed;
};

/// Combines the two parsed aspects of one instance. Throws DroppedInstance
/// if either aspect was dropped.
InstanceScore score_instance(const std::string& instance_id,
                             const ParsedRating& parsed_sc,
                             const ParsedRating& parsed_pq);

}  // namespace viescore
