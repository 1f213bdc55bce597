#include <doctest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "viescore/prompt.hpp"
#include "viescore/util.hpp"

using namespace viescore;
namespace fs = std::filesystem;

namespace {

const TemplateSet& templates() {
    static TemplateSet set = TemplateSet::load_dir(TEST_TEMPLATES_DIR);
    return set;
}

InstanceRecord make_record(TaskKind task) {
    InstanceRecord record;
    record.instance_id = "rec-1";
    record.task = task;
    record.model_name = "some-model";
    record.condition_texts[std::string(placeholder_key(task))] = "a red cube";
    for (int i = 0; i < condition_image_count(task); ++i)
        record.condition_images.push_back(
            make_solid_png(6, 6, static_cast<std::uint8_t>(50 + i), 0, 0));
    record.synthetic_image = make_solid_png(6, 6, 0, 200, 0);
    return record;
}

FewShotExample make_example(int arity) {
    FewShotExample ex;
    ex.request_images = {make_solid_png(5, 5, 1, 2, 3)};
    ex.request_text = "Example rating prompt body";
    std::string scores;
    for (int i = 0; i < arity; ++i) scores += (i ? ",8" : "8");
    ex.exemplar_reply = "{\"score\":[" + scores + "],\"reasoning\":\"clean\"}";
    return ex;
}

}  // namespace

TEST_CASE("arity table totals and per-task values") {
    int sc_sum = 0;
    for (TaskKind task : kAllTasks) {
        CHECK(sub_score_arity(task, AspectKind::PQ) == 2);
        sc_sum += sub_score_arity(task, AspectKind::SC);
    }
    CHECK(sc_sum == 14);
    CHECK(sub_score_arity(TaskKind::TextGuidedGeneration, AspectKind::SC) == 1);
    CHECK(sub_score_arity(TaskKind::MultiConceptComposition, AspectKind::SC) == 3);
    CHECK(condition_image_count(TaskKind::TextGuidedGeneration) == 0);
    CHECK(condition_image_count(TaskKind::SubjectDrivenEditing) == 2);
    CHECK(condition_image_count(TaskKind::ControlGuidedGeneration) == 1);
    CHECK(placeholder_key(TaskKind::MaskGuidedEditing) == "instruction");
    CHECK(placeholder_key(TaskKind::SubjectDrivenEditing) == "subject");
    CHECK(placeholder_key(TaskKind::ControlGuidedGeneration) == "prompt");
    for (TaskKind task : kAllTasks)
        CHECK(task_from_name(task_name(task)) == task);
}

TEST_CASE("context text carries the fixed instructions") {
    const std::string& context = templates().build_context();
    CHECK(context.find("\"score\" : [...]") != std::string::npos);
    CHECK(context.find("You are a professional digital artist") != std::string::npos);
    CHECK(templates().build_context() == context);  // stable across calls
}

TEST_CASE("build_rating_prompt substitutes placeholders exactly") {
    const std::string t2i = templates().build_rating_prompt(
        TaskKind::TextGuidedGeneration, AspectKind::SC, {{"prompt", "a red cube"}});
    CHECK(t2i.ends_with("Text Prompt: a red cube"));

    const std::string pq = templates().build_rating_prompt(
        TaskKind::TextGuidedGeneration, AspectKind::PQ, {});
    CHECK(pq.find("based on image naturalness") != std::string::npos);

    CHECK_THROWS_AS(templates().build_rating_prompt(TaskKind::TextGuidedEditing,
                                                    AspectKind::SC, {}),
                    MissingPlaceholder);
    CHECK_THROWS_AS(
        templates().build_rating_prompt(TaskKind::TextGuidedGeneration, AspectKind::SC,
                                        {{"prompt", "x"}, {"subject", "y"}}),
        UnknownPlaceholder);
}

TEST_CASE("template round-trip leaves no tokens and embeds every fill") {
    const std::string marker = "UNIQUE_FILL_MARKER_93571";
    for (TaskKind task : kAllTasks) {
        const std::string out = templates().build_rating_prompt(
            task, AspectKind::SC, {{std::string(placeholder_key(task)), marker}});
        CAPTURE(task_name(task));
        CHECK(out.find(marker) != std::string::npos);
        for (const char* token : {"<prompt>", "<instruction>", "<subject>"})
            CHECK(out.find(token) == std::string::npos);
    }
}

TEST_CASE("assemble_request image ordering and arity per aspect") {
    InstanceRecord mc = make_record(TaskKind::MultiConceptComposition);
    EvalRequest sc = templates().assemble_request(mc, AspectKind::SC,
                                                  ShotMode::ZeroShot, std::nullopt);
    CHECK(sc.expected_arity == 3);
    REQUIRE(sc.images.size() == 3);  // concept 1, concept 2, synthetic
    CHECK(sc.images[0] == mc.condition_images[0]);
    CHECK(sc.images[1] == mc.condition_images[1]);
    CHECK(sc.images[2] == mc.synthetic_image);

    for (TaskKind task : kAllTasks) {
        InstanceRecord record = make_record(task);
        EvalRequest pq = templates().assemble_request(record, AspectKind::PQ,
                                                      ShotMode::ZeroShot, std::nullopt);
        CAPTURE(task_name(task));
        CHECK(pq.images.size() == 1);  // only the synthetic image
        CHECK(pq.expected_arity == 2);
        CHECK(pq.images[0] == record.synthetic_image);
    }
}

TEST_CASE("assemble_request is deterministic") {
    InstanceRecord record = make_record(TaskKind::ControlGuidedGeneration);
    EvalRequest a = templates().assemble_request(record, AspectKind::SC,
                                                 ShotMode::ZeroShot, std::nullopt);
    EvalRequest b = templates().assemble_request(record, AspectKind::SC,
                                                 ShotMode::ZeroShot, std::nullopt);
    CHECK(a.text == b.text);
    CHECK(a.images == b.images);
}

TEST_CASE("one-shot requests embed the example ahead of the target") {
    InstanceRecord record = make_record(TaskKind::TextGuidedGeneration);
    FewShotExample ex = make_example(1);
    EvalRequest request =
        templates().assemble_request(record, AspectKind::SC, ShotMode::OneShot, ex);
    REQUIRE(request.images.size() == 2);
    CHECK(request.images[0] == ex.request_images[0]);
    CHECK(request.images[1] == record.synthetic_image);
    CHECK(request.text.find(ex.exemplar_reply) != std::string::npos);
    CHECK(request.text.find("EXAMPLE") != std::string::npos);

    // the example must come after the shared context
    CHECK(request.text.find("You are a professional digital artist") <
          request.text.find(ex.exemplar_reply));

    // shot mode and example presence must agree
    CHECK_THROWS_AS(templates().assemble_request(record, AspectKind::SC,
                                                 ShotMode::OneShot, std::nullopt),
                    PromptError);
    CHECK_THROWS_AS(
        templates().assemble_request(record, AspectKind::SC, ShotMode::ZeroShot, ex),
        PromptError);

    // an exemplar that cannot parse at the target arity is rejected
    FewShotExample bad = make_example(1);
    bad.exemplar_reply = "unparseable";
    CHECK_THROWS_AS(templates().assemble_request(record, AspectKind::SC,
                                                 ShotMode::OneShot, bad),
                    BadExemplar);
}

TEST_CASE("pq_with_inputs_request prepends the condition images only") {
    InstanceRecord editing = make_record(TaskKind::TextGuidedEditing);
    EvalRequest plain = templates().assemble_request(editing, AspectKind::PQ,
                                                     ShotMode::ZeroShot, std::nullopt);
    EvalRequest with_inputs =
        templates().pq_with_inputs_request(editing, ShotMode::ZeroShot, std::nullopt);
    CHECK(with_inputs.text == plain.text);
    REQUIRE(with_inputs.images.size() == 2);
    CHECK(with_inputs.images[0] == editing.condition_images[0]);
    CHECK(with_inputs.images[1] == editing.synthetic_image);

    // a task without condition images yields an identical request
    InstanceRecord t2i = make_record(TaskKind::TextGuidedGeneration);
    EvalRequest t2i_plain = templates().assemble_request(t2i, AspectKind::PQ,
                                                         ShotMode::ZeroShot, std::nullopt);
    EvalRequest t2i_with =
        templates().pq_with_inputs_request(t2i, ShotMode::ZeroShot, std::nullopt);
    CHECK(t2i_with.text == t2i_plain.text);
    CHECK(t2i_with.images == t2i_plain.images);
}

TEST_CASE("missing images are reported before dispatch") {
    InstanceRecord record = make_record(TaskKind::TextGuidedEditing);
    record.condition_images.clear();
    CHECK_THROWS_AS(templates().assemble_request(record, AspectKind::SC,
                                                 ShotMode::ZeroShot, std::nullopt),
                    ImageMissing);
    InstanceRecord no_synth = make_record(TaskKind::TextGuidedGeneration);
    no_synth.synthetic_image = ImageData{};
    CHECK_THROWS_AS(templates().assemble_request(no_synth, AspectKind::PQ,
                                                 ShotMode::ZeroShot, std::nullopt),
                    ImageMissing);
}

TEST_CASE("tampered template assets fail the checksum gate") {
    const fs::path dir = fixtures::scratch_dir("templates_tampered");
    for (const auto& entry : fs::directory_iterator(TEST_TEMPLATES_DIR))
        fs::copy_file(entry.path(), dir / entry.path().filename());
    // flip one byte of a pinned template
    const fs::path victim = dir / "pq.txt";
    std::string text = read_file_text(victim.string());
    text[0] = text[0] == 'X' ? 'Y' : 'X';
    write_file_text(victim.string(), text);
    CHECK_THROWS_AS(TemplateSet::load_dir(dir.string()), TemplateChecksumMismatch);

    // a template missing from the checksum manifest is also rejected
    const fs::path dir2 = fixtures::scratch_dir("templates_unpinned");
    for (const auto& entry : fs::directory_iterator(TEST_TEMPLATES_DIR))
        fs::copy_file(entry.path(), dir2 / entry.path().filename());
    std::string manifest = read_file_text((dir2 / "manifest.sha256").string());
    manifest = manifest.substr(manifest.find('\n') + 1);  // drop first pinned entry
    write_file_text((dir2 / "manifest.sha256").string(), manifest);
    CHECK_THROWS_AS(TemplateSet::load_dir(dir2.string()), TemplateChecksumMismatch);
}

TEST_CASE("checksums are exposed for run provenance") {
    const auto& sums = templates().checksums();
    CHECK(sums.size() == 9);  // context + pq + 7 SC templates
    CHECK(sums.count("context.txt") == 1);
    for (TaskKind task : kAllTasks)
        CHECK(sums.count("sc_" + std::string(task_name(task)) + ".txt") == 1);
}
