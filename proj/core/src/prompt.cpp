#include "viescore/prompt.hpp"

#include <array>
#include <filesystem>
#include <sstream>

#include "viescore/parser.hpp"
#include "viescore/util.hpp"

namespace viescore {

namespace {

constexpr std::array<std::string_view, 3> kPlaceholderNames = {"prompt", "instruction",
                                                               "subject"};

std::vector<std::string> scan_placeholders(const std::string& body) {
    std::vector<std::string> found;
    for (std::string_view name : kPlaceholderNames) {
        std::string token = "<" + std::string(name) + ">";
        if (body.find(token) != std::string::npos) found.emplace_back(name);
    }
    return found;
}

std::string rtrim(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ' ||
                          s.back() == '\t'))
        s.pop_back();
    return s;
}

std::string replace_all(std::string body, const std::string& token,
                        const std::string& value) {
    std::size_t pos = 0;
    while ((pos = body.find(token, pos)) != std::string::npos) {
        body.replace(pos, token.size(), value);
        pos += value.size();
    }
    return body;
}

std::map<std::string, std::string> read_checksum_manifest(const std::string& path) {
    std::map<std::string, std::string> entries;
    std::istringstream in(read_file_text(path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string hash, file;
        fields >> hash >> file;
        if (hash.size() != 64 || file.empty())
            throw TemplateChecksumMismatch("malformed checksum manifest line: " + line);
        entries[file] = hash;
    }
    return entries;
}

}  // namespace

TemplateSet TemplateSet::load_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    TemplateSet set;
    const auto manifest = read_checksum_manifest((fs::path(dir) / "manifest.sha256").string());

    auto load_checked = [&](const std::string& file) {
        std::string text = read_file_text((fs::path(dir) / file).string());
        auto it = manifest.find(file);
        if (it == manifest.end())
            throw TemplateChecksumMismatch("template not pinned in manifest: " + file);
        const std::string actual = sha256_hex(text);
        if (actual != it->second)
            throw TemplateChecksumMismatch("checksum mismatch for " + file + ": " +
                                           actual);
        set.checksums_[file] = actual;
        return text;
    };

    set.context_ = load_checked("context.txt");

    set.pq_template_.aspect = AspectKind::PQ;
    set.pq_template_.body = load_checked("pq.txt");
    set.pq_template_.placeholders = scan_placeholders(set.pq_template_.body);
    set.pq_template_.required_condition_images = 0;
    if (!set.pq_template_.placeholders.empty())
        throw TemplateChecksumMismatch("PQ template must not declare placeholders");

    for (TaskKind task : kAllTasks) {
        PromptTemplate tmpl;
        tmpl.aspect = AspectKind::SC;
        tmpl.body = load_checked("sc_" + std::string(task_name(task)) + ".txt");
        tmpl.placeholders = scan_placeholders(tmpl.body);
        tmpl.required_condition_images = condition_image_count(task);
        set.sc_templates_[std::string(task_name(task))] = std::move(tmpl);
    }
    return set;
}

const PromptTemplate& TemplateSet::rating_template(TaskKind task,
                                                   AspectKind aspect) const {
    if (aspect == AspectKind::PQ) return pq_template_;
    auto it = sc_templates_.find(std::string(task_name(task)));
    if (it == sc_templates_.end())
        throw NoTemplate("no SC template for task " + std::string(task_name(task)));
    return it->second;
}

std::string TemplateSet::build_rating_prompt(TaskKind task, AspectKind aspect,
                                             const PlaceholderMap& fills) const {
    const PromptTemplate& tmpl = rating_template(task, aspect);
    for (const auto& [key, value] : fills) {
        if (std::find(tmpl.placeholders.begin(), tmpl.placeholders.end(), key) ==
            tmpl.placeholders.end())
            throw UnknownPlaceholder("template declares no placeholder '" + key + "'");
    }
    std::string body = tmpl.body;
    for (const std::string& name : tmpl.placeholders) {
        auto it = fills.find(name);
        if (it == fills.end())
            throw MissingPlaceholder("placeholder '" + name + "' not filled");
        body = replace_all(body, "<" + name + ">", it->second);
    }
    return rtrim(std::move(body));
}

EvalRequest TemplateSet::assemble_request(
    const InstanceRecord& record, AspectKind aspect, ShotMode shot,
    const std::optional<FewShotExample>& example) const {
    if ((shot == ShotMode::OneShot) != example.has_value())
        throw PromptError("one-shot requests require exactly one example");

    EvalRequest request;
    request.instance_id = record.instance_id;
    request.aspect = aspect;
    request.shot_mode = shot;
    request.expected_arity = sub_score_arity(record.task, aspect);

    const PlaceholderMap empty_fills;
    const PlaceholderMap& fills =
        aspect == AspectKind::SC ? record.condition_texts : empty_fills;
    const std::string rating = build_rating_prompt(record.task, aspect, fills);

    if (record.synthetic_image.bytes.empty())
        throw ImageMissing("record lacks a synthetic image: " + record.instance_id);
    if (aspect == AspectKind::SC) {
        const int required = condition_image_count(record.task);
        if (static_cast<int>(record.condition_images.size()) != required)
            throw ImageMissing("record " + record.instance_id + " has " +
                               std::to_string(record.condition_images.size()) +
                               " condition images, task requires " +
                               std::to_string(required));
    }

    if (shot == ShotMode::OneShot) {
        if (!parse_scores(example->exemplar_reply, request.expected_arity).ok())
            throw BadExemplar("exemplar reply does not parse at arity " +
                              std::to_string(request.expected_arity));
        request.text = build_context() + "\nEXAMPLE\n" + example->request_text + "\n" +
                       example->exemplar_reply + "\n\nNow evaluate the following:\n" +
                       rating;
        request.images = example->request_images;
    } else {
        request.text = build_context() + "\n" + rating;
    }

    if (aspect == AspectKind::SC) {
        for (const ImageData& img : record.condition_images)
            request.images.push_back(img);
    }
    request.images.push_back(record.synthetic_image);
    return request;
}

EvalRequest TemplateSet::pq_with_inputs_request(
    const InstanceRecord& record, ShotMode shot,
    const std::optional<FewShotExample>& example) const {
    EvalRequest request = assemble_request(record, AspectKind::PQ, shot, example);
    // Same text, condition images inserted ahead of the synthetic image.
    request.images.insert(request.images.end() - 1, record.condition_images.begin(),
                          record.condition_images.end());
    return request;
}

}  // namespace viescore
