#include "viescore/parser.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

#include "viescore/util.hpp"

namespace viescore {

std::string_view parse_status_name(ParseStatus status) {
    switch (status) {
        case ParseStatus::Parsed: return "parsed";
        case ParseStatus::PenaltyFilled: return "penalty_filled";
        case ParseStatus::Dropped: return "dropped";
    }
    return "unknown";
}

namespace {

std::string strip_code_fences(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::size_t pos = line.find_first_not_of(" \t");
        if (pos != std::string::npos && line.compare(pos, 3, "```") == 0) continue;
        out += line;
        out += '\n';
    }
    return out;
}

// Removes ",}" / ",]" patterns so slightly sloppy model output still parses.
std::string strip_trailing_commas(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool in_string = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            out.push_back(c);
            if (c == '\\' && i + 1 < text.size()) {
                out.push_back(text[++i]);
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
            out.push_back(c);
            continue;
        }
        if (c == ',') {
            std::size_t j = i + 1;
            while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
            if (j < text.size() && (text[j] == '}' || text[j] == ']')) continue;
        }
        out.push_back(c);
    }
    return out;
}

std::optional<double> as_number(const nlohmann::json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            std::size_t consumed = 0;
            const std::string s = v.get<std::string>();
            double d = std::stod(s, &consumed);
            while (consumed < s.size() &&
                   std::isspace(static_cast<unsigned char>(s[consumed])))
                ++consumed;
            if (consumed == s.size()) return d;
        } catch (const std::exception&) {
        }
    }
    return std::nullopt;
}

}  // namespace

std::string extract_candidate_block(const std::string& text) {
    const std::string body = strip_code_fences(text);
    std::size_t start = body.find('{');
    if (start == std::string::npos) return {};
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = start; i < body.size(); ++i) {
        char c = body[i];
        if (in_string) {
            if (c == '\\')
                ++i;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth == 0) return body.substr(start, i - start + 1);
        }
    }
    return {};
}

ScoreParseResult parse_scores(const std::string& text, int expected_arity) {
    ScoreParseResult result;
    const std::string block = extract_candidate_block(text);
    if (block.empty()) {
        result.failure = ParseFailure::NoBlock;
        return result;
    }
    nlohmann::json doc =
        nlohmann::json::parse(strip_trailing_commas(block), nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("score")) {
        result.failure = ParseFailure::NotNumeric;
        return result;
    }

    const nlohmann::json& score = doc["score"];
    std::vector<double> values;
    if (score.is_array()) {
        for (const auto& v : score) {
            auto d = as_number(v);
            if (!d || !std::isfinite(*d)) {
                result.failure = ParseFailure::NotNumeric;
                return result;
            }
            values.push_back(*d);
        }
    } else {
        auto d = as_number(score);
        if (!d || !std::isfinite(*d)) {
            result.failure = ParseFailure::NotNumeric;
            return result;
        }
        // A bare number only satisfies the single-sub-score templates.
        if (expected_arity != 1) {
            result.failure = ParseFailure::ArityMismatch;
            return result;
        }
        values.push_back(*d);
    }
    if (static_cast<int>(values.size()) != expected_arity) {
        result.failure = ParseFailure::ArityMismatch;
        return result;
    }
    for (double v : values) {
        if (v < 0.0 || v > 10.0) {
            result.failure = ParseFailure::OutOfRange;
            return result;
        }
    }
    result.sub_scores = std::move(values);
    if (doc.contains("reasoning") && doc["reasoning"].is_string())
        result.rationale = doc["reasoning"].get<std::string>();
    return result;
}

std::vector<double> penalty_fill(int expected_arity, std::uint64_t seed,
                                 const std::string& instance_id, AspectKind aspect) {
    std::string key = std::to_string(seed);
    key += '|';
    key += instance_id;
    key += '|';
    key += aspect_name(aspect);
    std::uint64_t state = fnv1a64(key);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(expected_arity));
    for (int i = 0; i < expected_arity; ++i)
        out.push_back(static_cast<double>(uniform_below(state, 11)));
    return out;
}

ParsedRating parse_reply(const ReplyView& reply, int expected_arity,
                         std::uint64_t seed, const std::string& instance_id,
                         AspectKind aspect) {
    ParsedRating rating;
    if (reply.refused) {
        rating.status = ParseStatus::Dropped;
        return rating;
    }
    rating.raw_excerpt = extract_candidate_block(reply.text);
    ScoreParseResult parsed = parse_scores(reply.text, expected_arity);
    if (parsed.ok()) {
        rating.status = ParseStatus::Parsed;
        rating.sub_scores = std::move(parsed.sub_scores);
        rating.rationale = std::move(parsed.rationale);
    } else {
        rating.status = ParseStatus::PenaltyFilled;
        rating.sub_scores = penalty_fill(expected_arity, seed, instance_id, aspect);
    }
    return rating;
}

}  // namespace viescore
