#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "viescore/image.hpp"
#include "viescore/scoring.hpp"
#include "viescore/task.hpp"

namespace viescore {

struct DatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SchemaError : DatasetError {
    using DatasetError::DatasetError;
};
struct DanglingImage : DatasetError {
    using DatasetError::DatasetError;
};
struct DuplicateId : DatasetError {
    using DatasetError::DatasetError;
};
struct ArityError : DatasetError {
    using DatasetError::DatasetError;
};
struct UnresolvedRow : DatasetError {
    using DatasetError::DatasetError;
};
struct MixedSignFlag : DatasetError {
    using DatasetError::DatasetError;
};

using PlaceholderMap = std::map<std::string, std::string>;

/// One evaluation unit: a synthetic image with its conditions and ratings.
struct InstanceRecord {
    std::string instance_id;
    TaskKind task = TaskKind::TextGuidedGeneration;
    std::string model_name;  // image synthesis model under evaluation
    PlaceholderMap condition_texts;
    std::vector<std::string> condition_image_paths;
    std::string synthetic_image_path;
    std::vector<ImageData> condition_images;  // loaded and pre-verified
    ImageData synthetic_image;
    HumanRating human;
};

struct Manifest {
    TaskKind task = TaskKind::TextGuidedGeneration;
    std::vector<InstanceRecord> records;
    std::vector<std::string> model_names;  // sorted, unique
    std::string source_note;
};

/// Loads and fully validates a line-delimited manifest. Image paths are
/// resolved relative to the manifest's directory and decoded eagerly, so a
/// manifest that loads cleanly can be scored without further I/O errors.
Manifest load_manifest(const std::string& path);

struct BaselineScoreFile {
    std::string metric_name;  // CLIP-Score, LPIPS, DINO, CLIP-I, ...
    bool invert = false;      // negate values on ingestion (distance metrics)
    struct Row {
        std::string instance_id;
        std::string model_name;
        double value = 0.0;
    };
    std::vector<Row> rows;
};

BaselineScoreFile load_baseline_file(const std::string& path);

/// Per-instance join of human scores and baseline metric values.
struct BaselineTable {
    std::vector<std::string> metric_names;  // sorted, unique
    struct Row {
        std::string instance_id;
        std::string model_name;
        std::map<std::string, double> metric_values;
    };
    std::vector<Row> rows;  // one per manifest record, manifest order
};

BaselineTable attach_baselines(const Manifest& manifest,
                               const std::vector<BaselineScoreFile>& files);

}  // namespace viescore
