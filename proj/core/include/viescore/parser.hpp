#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "viescore/task.hpp"

namespace viescore {

enum class ParseStatus { Parsed, PenaltyFilled, Dropped };

std::string_view parse_status_name(ParseStatus status);

/// Sub-scores and rationale extracted from one raw model reply.
struct ParsedRating {
    std::vector<double> sub_scores;  // each in [0, 10]
    std::string rationale;
    ParseStatus status = ParseStatus::PenaltyFilled;
    std::string raw_excerpt;  // the matched brace block, if any
};

enum class ParseFailure { NoBlock, ArityMismatch, OutOfRange, NotNumeric };

struct ScoreParseResult {
    std::vector<double> sub_scores;
    std::string rationale;
    std::optional<ParseFailure> failure;

    bool ok() const { return !failure.has_value(); }
};

/// First balanced top-level brace block of the reply, with code fences and
/// surrounding prose stripped. Empty string when no block exists.
std::string extract_candidate_block(const std::string& text);

/// Parses {"score": [...], "reasoning": "..."} out of a reply. A bare number
/// under "score" is accepted when expected_arity is 1. Values outside [0, 10]
/// are failures, not clamped.
ScoreParseResult parse_scores(const std::string& text, int expected_arity);

/// Deterministic uniform integers from {0..10}, keyed by (seed, instance, aspect).
std::vector<double> penalty_fill(int expected_arity, std::uint64_t seed,
                                 const std::string& instance_id, AspectKind aspect);

struct ReplyView {
    std::string text;
    bool refused = false;
};

/// Total mapping from a raw reply to a ParsedRating: refusals are Dropped,
/// parse failures are penalty-filled, and nothing ever throws.
ParsedRating parse_reply(const ReplyView& reply, int expected_arity,
                         std::uint64_t seed, const std::string& instance_id,
                         AspectKind aspect);

}  // namespace viescore
