#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "viescore/dataset.hpp"
#include "viescore/image.hpp"
#include "viescore/task.hpp"

namespace viescore {

struct PromptError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingPlaceholder : PromptError {
    using PromptError::PromptError;
};
struct UnknownPlaceholder : PromptError {
    using PromptError::PromptError;
};
struct NoTemplate : PromptError {
    using PromptError::PromptError;
};
struct ImageMissing : PromptError {
    using PromptError::PromptError;
};
struct TemplateChecksumMismatch : PromptError {
    using PromptError::PromptError;
};
struct BadExemplar : PromptError {
    using PromptError::PromptError;
};

enum class ShotMode { ZeroShot, OneShot };

struct PromptTemplate {
    AspectKind aspect = AspectKind::SC;
    std::string body;  // placeholders: <prompt>, <instruction>, <subject>
    std::vector<std::string> placeholders;  // declared tokens, bare names
    int required_condition_images = 0;
};

/// A worked example prepended to the rating prompt in one-shot mode.
struct FewShotExample {
    std::vector<ImageData> request_images;
    std::string request_text;
    std::string exemplar_reply;  // must parse under the target arity
};

/// One fully assembled multimodal message for a single (instance, aspect).
struct EvalRequest {
    std::string instance_id;
    AspectKind aspect = AspectKind::SC;
    std::string text;
    std::vector<ImageData> images;
    ShotMode shot_mode = ShotMode::ZeroShot;
    int expected_arity = 1;
};

/// The Context plus per-(task, aspect) rating prompt texts, loaded from a
/// directory of plain-text assets pinned by a sha256 manifest.
class TemplateSet {
  public:
    /// Loads every template file and verifies it against manifest.sha256.
    static TemplateSet load_dir(const std::string& dir);

    const std::string& build_context() const { return context_; }

    std::string build_rating_prompt(TaskKind task, AspectKind aspect,
                                    const PlaceholderMap& fills) const;

    EvalRequest assemble_request(const InstanceRecord& record, AspectKind aspect,
                                 ShotMode shot,
                                 const std::optional<FewShotExample>& example) const;

    /// PQ request with the condition images prepended (ablation arm).
    EvalRequest pq_with_inputs_request(
        const InstanceRecord& record, ShotMode shot,
        const std::optional<FewShotExample>& example) const;

    const PromptTemplate& rating_template(TaskKind task, AspectKind aspect) const;

    /// file name -> sha256, for run provenance.
    const std::map<std::string, std::string>& checksums() const { return checksums_; }

  private:
    std::string context_;
    std::map<std::string, PromptTemplate> sc_templates_;  // keyed by task_name
    PromptTemplate pq_template_;
    std::map<std::string, std::string> checksums_;
};

}  // namespace viescore
