#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace viescore {

/// The seven conditional image synthesis tasks covered by the harness.
enum class TaskKind {
    TextGuidedGeneration,
    MaskGuidedEditing,
    TextGuidedEditing,
    SubjectDrivenGeneration,
    SubjectDrivenEditing,
    MultiConceptComposition,
    ControlGuidedGeneration,
};

inline constexpr std::array<TaskKind, 7> kAllTasks = {
    TaskKind::TextGuidedGeneration,    TaskKind::MaskGuidedEditing,
    TaskKind::TextGuidedEditing,       TaskKind::SubjectDrivenGeneration,
    TaskKind::SubjectDrivenEditing,    TaskKind::MultiConceptComposition,
    TaskKind::ControlGuidedGeneration,
};

/// Rating aspect: semantic consistency or perceptual quality.
enum class AspectKind { SC, PQ };

/// Number of sub-scores the model is instructed to emit for (task, aspect).
constexpr int sub_score_arity(TaskKind task, AspectKind aspect) {
    if (aspect == AspectKind::PQ) return 2;  // naturalness, artifacts
    switch (task) {
        case TaskKind::TextGuidedGeneration: return 1;
        case TaskKind::MultiConceptComposition: return 3;
        default: return 2;
    }
}

/// Condition images the SC rating prompt expects ahead of the synthetic image.
constexpr int condition_image_count(TaskKind task) {
    switch (task) {
        case TaskKind::TextGuidedGeneration: return 0;
        case TaskKind::SubjectDrivenEditing:
        case TaskKind::MultiConceptComposition: return 2;
        default: return 1;
    }
}

/// The single text condition each task's SC template substitutes.
constexpr std::string_view placeholder_key(TaskKind task) {
    switch (task) {
        case TaskKind::TextGuidedEditing:
        case TaskKind::MaskGuidedEditing: return "instruction";
        case TaskKind::SubjectDrivenEditing: return "subject";
        default: return "prompt";
    }
}

std::string_view task_name(TaskKind task);
std::optional<TaskKind> task_from_name(std::string_view name);
std::string_view aspect_name(AspectKind aspect);

}  // namespace viescore
