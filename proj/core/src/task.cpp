#include "viescore/task.hpp"

namespace viescore {

std::string_view task_name(TaskKind task) {
    switch (task) {
        case TaskKind::TextGuidedGeneration: return "text_guided_generation";
        case TaskKind::MaskGuidedEditing: return "mask_guided_editing";
        case TaskKind::TextGuidedEditing: return "text_guided_editing";
        case TaskKind::SubjectDrivenGeneration: return "subject_driven_generation";
        case TaskKind::SubjectDrivenEditing: return "subject_driven_editing";
        case TaskKind::MultiConceptComposition: return "multi_concept_composition";
        case TaskKind::ControlGuidedGeneration: return "control_guided_generation";
    }
    return "unknown";
}

std::optional<TaskKind> task_from_name(std::string_view name) {
    for (TaskKind t : kAllTasks)
        if (task_name(t) == name) return t;
    return std::nullopt;
}

std::string_view aspect_name(AspectKind aspect) {
    return aspect == AspectKind::SC ? "SC" : "PQ";
}

}  // namespace viescore
