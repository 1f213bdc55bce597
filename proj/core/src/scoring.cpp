#include "viescore/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace viescore {

namespace {

double min_checked(const std::vector<double>& values, const char* which) {
    if (values.empty()) throw EmptySubScores(std::string(which) + " sub-scores empty");
    for (double v : values)
        if (v < 0.0 || v > 10.0)
            throw OutOfRange(std::string(which) + " sub-score outside [0, 10]");
    return *std::min_element(values.begin(), values.end());
}

}  // namespace

double overall_score(const std::vector<double>& alpha, const std::vector<double>& beta) {
    return std::sqrt(min_checked(alpha, "SC") * min_checked(beta, "PQ"));
}

double normalize(double v) {
    if (v < 0.0 || v > 10.0) throw OutOfRange("value outside [0, 10]");
    return v / 10.0;
}

double human_aggregate(const std::array<double, 3>& rater_values) {
    int halves = 0;  // exact arithmetic in units of 1/2
    for (double v : rater_values) {
        if (v == 0.0)
            halves += 0;
        else if (v == 0.5)
            halves += 1;
        else if (v == 1.0)
            halves += 2;
        else
            throw InvalidRaterValue("rater value must be one of {0, 0.5, 1}");
    }
    return static_cast<double>(halves) / 6.0;
}

double HumanRating::overall() const { return std::sqrt(sc_avg() * pq_avg()); }

InstanceScore score_instance(const std::string& instance_id,
                             const ParsedRating& parsed_sc,
                             const ParsedRating& parsed_pq) {
    if (parsed_sc.status == ParseStatus::Dropped ||
        parsed_pq.status == ParseStatus::Dropped)
        throw DroppedInstance("dropped instance reached scoring: " + instance_id);
    InstanceScore score;
    score.instance_id = instance_id;
    score.alpha = parsed_sc.sub_scores;
    score.beta = parsed_pq.sub_scores;
    score.sc = normalize(min_checked(score.alpha, "SC"));
    score.pq = normalize(min_checked(score.beta, "PQ"));
    score.overall = std::sqrt(score.sc * score.pq);
    score.sc_provenance = parsed_sc.status;
    score.pq_provenance = parsed_pq.status;
    return score;
}

}  // namespace viescore
