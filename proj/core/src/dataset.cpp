#include "viescore/dataset.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace viescore {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json parse_line(const std::string& line, const std::string& path, int line_no) {
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw SchemaError(path + ":" + std::to_string(line_no) + ": not a JSON object");
    return doc;
}

std::string require_string(const json& doc, const char* key, const std::string& where) {
    if (!doc.contains(key) || !doc[key].is_string())
        throw SchemaError(where + ": missing or non-string field '" + key + "'");
    return doc[key].get<std::string>();
}

std::array<double, 3> require_rater_triple(const json& doc, const char* key,
                                           const std::string& where) {
    if (!doc.contains(key) || !doc[key].is_array() || doc[key].size() != 3)
        throw SchemaError(where + ": field '" + key + "' must be a 3-element array");
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i) {
        if (!doc[key][i].is_number())
            throw SchemaError(where + ": non-numeric rater value in '" + key + "'");
        out[static_cast<std::size_t>(i)] = doc[key][i].get<double>();
    }
    return out;
}

ImageData load_checked_image(const fs::path& base, const std::string& rel,
                             const std::string& where) {
    fs::path full = base / rel;
    if (!fs::exists(full)) throw DanglingImage(where + ": image not found: " + rel);
    try {
        return load_image(full.string());
    } catch (const DecodeError& e) {
        throw DanglingImage(where + ": image failed to decode: " + rel + " (" +
                            e.what() + ")");
    }
}

}  // namespace

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open manifest: " + path);
    const fs::path base = fs::path(path).parent_path();

    std::string line;
    int line_no = 0;

    // Header line pins the format version and the manifest's task.
    if (!std::getline(in, line)) throw SchemaError(path + ": empty manifest");
    ++line_no;
    json header = parse_line(line, path, line_no);
    if (!header.contains("format_version") || !header["format_version"].is_number_integer() ||
        header["format_version"].get<int>() != 1)
        throw SchemaError(path + ":1: unsupported or missing format_version");
    Manifest manifest;
    const std::string task_str = require_string(header, "task", path + ":1");
    auto task = task_from_name(task_str);
    if (!task) throw SchemaError(path + ":1: unknown task '" + task_str + "'");
    manifest.task = *task;
    if (header.contains("source_note") && header["source_note"].is_string())
        manifest.source_note = header["source_note"].get<std::string>();

    std::set<std::string> seen_ids;
    std::set<std::string> models;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(line_no);
        json doc = parse_line(line, path, line_no);

        InstanceRecord rec;
        rec.task = manifest.task;
        rec.instance_id = require_string(doc, "instance_id", where);
        rec.model_name = require_string(doc, "model", where);
        if (!seen_ids.insert(rec.instance_id).second)
            throw DuplicateId(where + ": duplicate instance_id '" + rec.instance_id + "'");

        if (!doc.contains("conditions") || !doc["conditions"].is_object())
            throw SchemaError(where + ": missing 'conditions' object");
        for (const auto& [key, value] : doc["conditions"].items()) {
            if (!value.is_string())
                throw SchemaError(where + ": condition '" + key + "' must be a string");
            rec.condition_texts[key] = value.get<std::string>();
        }
        const std::string expected_key(placeholder_key(manifest.task));
        if (rec.condition_texts.size() != 1 ||
            rec.condition_texts.begin()->first != expected_key)
            throw SchemaError(where + ": conditions must contain exactly the '" +
                              expected_key + "' key for this task");

        if (!doc.contains("condition_images") || !doc["condition_images"].is_array())
            throw SchemaError(where + ": missing 'condition_images' array");
        for (const auto& p : doc["condition_images"]) {
            if (!p.is_string())
                throw SchemaError(where + ": condition image path must be a string");
            rec.condition_image_paths.push_back(p.get<std::string>());
        }
        const int expected_images = condition_image_count(manifest.task);
        if (static_cast<int>(rec.condition_image_paths.size()) != expected_images)
            throw ArityError(where + ": task expects " + std::to_string(expected_images) +
                             " condition images, got " +
                             std::to_string(rec.condition_image_paths.size()));
        rec.synthetic_image_path = require_string(doc, "synthetic_image", where);

        for (const std::string& p : rec.condition_image_paths)
            rec.condition_images.push_back(load_checked_image(base, p, where));
        rec.synthetic_image = load_checked_image(base, rec.synthetic_image_path, where);

        if (!doc.contains("human") || !doc["human"].is_object())
            throw SchemaError(where + ": missing 'human' object");
        rec.human.instance_id = rec.instance_id;
        rec.human.rater_scores_sc = require_rater_triple(doc["human"], "sc", where);
        rec.human.rater_scores_pq = require_rater_triple(doc["human"], "pq", where);
        for (double v : rec.human.rater_scores_sc)
            if (v != 0.0 && v != 0.5 && v != 1.0)
                throw SchemaError(where + ": SC rater value must be one of {0, 0.5, 1}");
        for (double v : rec.human.rater_scores_pq)
            if (v != 0.0 && v != 0.5 && v != 1.0)
                throw SchemaError(where + ": PQ rater value must be one of {0, 0.5, 1}");

        models.insert(rec.model_name);
        manifest.records.push_back(std::move(rec));
    }
    manifest.model_names.assign(models.begin(), models.end());
    return manifest;
}

BaselineScoreFile load_baseline_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open baseline file: " + path);
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw SchemaError(path + ": empty baseline file");
    ++line_no;
    json header = parse_line(line, path, line_no);
    BaselineScoreFile file;
    file.metric_name = require_string(header, "metric_name", path + ":1");
    if (header.contains("invert")) {
        if (!header["invert"].is_boolean())
            throw SchemaError(path + ":1: 'invert' must be a boolean");
        file.invert = header["invert"].get<bool>();
    }
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(line_no);
        json doc = parse_line(line, path, line_no);
        BaselineScoreFile::Row row;
        row.instance_id = require_string(doc, "instance_id", where);
        row.model_name = require_string(doc, "model", where);
        if (!doc.contains("value") || !doc["value"].is_number())
            throw SchemaError(where + ": missing numeric 'value'");
        row.value = doc["value"].get<double>();
        if (file.invert) row.value = -row.value;
        file.rows.push_back(std::move(row));
    }
    return file;
}

BaselineTable attach_baselines(const Manifest& manifest,
                               const std::vector<BaselineScoreFile>& files) {
    std::map<std::string, bool> invert_seen;
    for (const auto& f : files) {
        auto [it, inserted] = invert_seen.emplace(f.metric_name, f.invert);
        if (!inserted && it->second != f.invert)
            throw MixedSignFlag("metric '" + f.metric_name +
                                "' has conflicting invert flags across files");
    }

    std::set<std::string> keys;
    for (const auto& rec : manifest.records)
        keys.insert(rec.instance_id + "\x1f" + rec.model_name);

    BaselineTable table;
    std::set<std::string> metric_set;
    std::map<std::string, std::map<std::string, double>> by_key;
    for (const auto& f : files) {
        metric_set.insert(f.metric_name);
        for (const auto& row : f.rows) {
            const std::string key = row.instance_id + "\x1f" + row.model_name;
            if (!keys.count(key))
                throw UnresolvedRow("baseline row (" + row.instance_id + ", " +
                                    row.model_name + ") has no manifest record");
            by_key[key][f.metric_name] = row.value;
        }
    }
    table.metric_names.assign(metric_set.begin(), metric_set.end());
    for (const auto& rec : manifest.records) {
        BaselineTable::Row row;
        row.instance_id = rec.instance_id;
        row.model_name = rec.model_name;
        auto it = by_key.find(rec.instance_id + "\x1f" + rec.model_name);
        if (it != by_key.end()) row.metric_values = it->second;
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace viescore
