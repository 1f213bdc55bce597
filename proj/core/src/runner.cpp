#include "viescore/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "viescore/parser.hpp"
#include "viescore/util.hpp"

namespace viescore {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string format_value(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(6) << v;
    return out.str();
}

std::string combined_template_checksum(const TemplateSet& templates) {
    std::string joined;
    for (const auto& [file, hash] : templates.checksums()) {
        joined += file;
        joined += ':';
        joined += hash;
        joined += '\n';
    }
    return sha256_hex(joined);
}

EvalRequest maybe_concat(EvalRequest request, bool concat_enabled) {
    if (concat_enabled && request.images.size() > 1) {
        ImageData merged = concat_horizontal(request.images);
        request.images.clear();
        request.images.push_back(std::move(merged));
    }
    return request;
}

struct RatedInstance {
    const InstanceRecord* record = nullptr;
    std::string task;
    std::optional<InstanceScore> score;
    std::string failure;
};

struct RatedTask {
    std::string task;
    std::vector<RatedInstance> instances;  // sorted by instance_id
};

/// Runs the dispatch/parse/score phases for every manifest. pq_with_inputs
/// selects the ablation arm for the PQ requests.
std::vector<RatedTask> rate_all(const RunConfig& config, const TemplateSet& templates,
                                const std::vector<Manifest>& manifests,
                                bool pq_with_inputs) {
    BackendConfig backend_cfg = config.backend;
    if (backend_cfg.cache_dir.empty() && backend_cfg.kind != BackendKind::Replay &&
        !config.output_dir.empty())
        backend_cfg.cache_dir = (fs::path(config.output_dir) / "cache").string();
    auto backend = Backend::create(backend_cfg);

    std::vector<RatedTask> result;
    for (const Manifest& manifest : manifests) {
        RatedTask rated;
        rated.task = std::string(task_name(manifest.task));

        std::optional<FewShotExample> sc_example, pq_example;
        if (config.shot_mode == ShotMode::OneShot) {
            auto it = config.examples_by_task.find(rated.task);
            if (it == config.examples_by_task.end())
                throw PromptError("one-shot run lacks an example for task " + rated.task);
            sc_example = it->second.sc;
            pq_example = it->second.pq;
        }

        rated.instances.resize(manifest.records.size());
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;

        auto worker = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= manifest.records.size()) return;
                const InstanceRecord& record = manifest.records[i];
                RatedInstance& out = rated.instances[i];
                out.record = &record;
                out.task = rated.task;
                try {
                    EvalRequest sc_req = maybe_concat(
                        templates.assemble_request(record, AspectKind::SC,
                                                   config.shot_mode, sc_example),
                        config.concat_for_single_image_backend);
                    EvalRequest pq_req = maybe_concat(
                        pq_with_inputs
                            ? templates.pq_with_inputs_request(record, config.shot_mode,
                                                               pq_example)
                            : templates.assemble_request(record, AspectKind::PQ,
                                                         config.shot_mode, pq_example),
                        config.concat_for_single_image_backend);

                    RawReply sc_reply = backend->send(sc_req);
                    RawReply pq_reply = backend->send(pq_req);

                    auto transport_failure = [](const RawReply& r) {
                        return r.status != ReplyStatus::Ok &&
                               r.status != ReplyStatus::Refused;
                    };
                    if (transport_failure(sc_reply) || transport_failure(pq_reply)) {
                        out.failure = std::string(reply_status_name(
                            transport_failure(sc_reply) ? sc_reply.status
                                                        : pq_reply.status));
                        continue;
                    }

                    ParsedRating sc_parsed = parse_reply(
                        ReplyView{sc_reply.text, sc_reply.status == ReplyStatus::Refused},
                        sc_req.expected_arity, config.seed, record.instance_id,
                        AspectKind::SC);
                    ParsedRating pq_parsed = parse_reply(
                        ReplyView{pq_reply.text, pq_reply.status == ReplyStatus::Refused},
                        pq_req.expected_arity, config.seed, record.instance_id,
                        AspectKind::PQ);
                    if (sc_parsed.status == ParseStatus::Dropped ||
                        pq_parsed.status == ParseStatus::Dropped) {
                        out.failure = "dropped";
                        continue;
                    }
                    out.score =
                        score_instance(record.instance_id, sc_parsed, pq_parsed);
                } catch (const CacheMiss&) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                } catch (const std::exception&) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };

        const int workers =
            std::max(1, std::min<int>(backend_cfg.max_in_flight,
                                      static_cast<int>(manifest.records.size())));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);

        std::sort(rated.instances.begin(), rated.instances.end(),
                  [](const RatedInstance& a, const RatedInstance& b) {
                      return a.record->instance_id < b.record->instance_id;
                  });
        result.push_back(std::move(rated));
    }
    return result;
}

std::vector<ScoreRow> to_score_rows(const RatedTask& rated) {
    std::vector<ScoreRow> rows;
    rows.reserve(rated.instances.size());
    for (const RatedInstance& inst : rated.instances) {
        ScoreRow row;
        row.instance_id = inst.record->instance_id;
        row.model_name = inst.record->model_name;
        row.task = inst.task;
        row.score = inst.score;
        row.failure = inst.failure;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_meta_header(std::ostream& out,
                       const std::map<std::string, std::string>& run_meta) {
    for (const auto& [key, value] : run_meta) out << "# " << key << "=" << value << "\n";
}

json cell_to_json(const CorrelationCell& cell) {
    auto opt = [](const std::optional<double>& v) {
        return v ? json(*v) : json(nullptr);
    };
    return {{"sc", opt(cell.sc)},
            {"pq", opt(cell.pq)},
            {"overall", opt(cell.overall)},
            {"n", cell.n}};
}

json report_to_json(const CorrelationReport& report) {
    json per_model = json::object();
    for (const auto& [model, cell] : report.per_model)
        per_model[model] = cell_to_json(cell);
    return {{"task", report.task},
            {"method", report.method},
            {"per_model", per_model},
            {"task_level", cell_to_json(report.task_level)}};
}

std::string cell_text(const CorrelationCell& cell) {
    auto fmt = [](const std::optional<double>& v) {
        return v ? format_value(*v) : std::string("undefined");
    };
    std::ostringstream out;
    out << std::left << std::setw(12) << fmt(cell.sc) << std::setw(12) << fmt(cell.pq)
        << std::setw(12) << fmt(cell.overall) << "n=" << cell.n;
    return out.str();
}

std::string report_to_text(const CorrelationReport& report) {
    std::ostringstream out;
    out << "task: " << report.task << "  method: " << report.method << "\n";
    out << std::left << std::setw(28) << "model" << std::setw(12) << "SC"
        << std::setw(12) << "PQ" << std::setw(12) << "Overall" << "\n";
    for (const auto& [model, cell] : report.per_model)
        out << std::left << std::setw(28) << model << cell_text(cell) << "\n";
    out << std::left << std::setw(28) << "task_level" << cell_text(report.task_level)
        << "\n";
    return out.str();
}

void write_report_pair(const fs::path& dir, const std::string& stem,
                       const CorrelationReport& report,
                       const std::map<std::string, std::string>& run_meta) {
    {
        json doc = report_to_json(report);
        doc["meta"] = run_meta;
        write_file_text((dir / (stem + ".json")).string(), doc.dump(2) + "\n");
    }
    std::ostringstream text;
    write_meta_header(text, run_meta);
    text << report_to_text(report);
    write_file_text((dir / (stem + ".txt")).string(), text.str());
}

}  // namespace

std::map<std::string, std::string> build_run_meta(const RunConfig& config,
                                                  const TemplateSet& templates) {
    std::map<std::string, std::string> meta;
    meta["seed"] = std::to_string(config.seed);
    meta["shots"] = config.shot_mode == ShotMode::OneShot ? "1" : "0";
    meta["backend_model"] = config.backend.model_name;
    switch (config.backend.kind) {
        case BackendKind::LiveHttp: meta["backend"] = "live"; break;
        case BackendKind::Replay: meta["backend"] = "replay"; break;
        case BackendKind::SyntheticMock: meta["backend"] = "mock"; break;
    }
    meta["pq_with_inputs"] = config.pq_with_inputs ? "true" : "false";
    meta["concat_images"] = config.concat_for_single_image_backend ? "true" : "false";
    meta["templates_sha256"] = combined_template_checksum(templates);
    return meta;
}

void write_score_table(const std::string& path, const std::vector<ScoreRow>& rows,
                       const std::map<std::string, std::string>& run_meta) {
    std::ostringstream out;
    write_meta_header(out, run_meta);
    out << "instance_id\tmodel\ttask\tsc\tpq\toverall\tsc_provenance\tpq_provenance\n";
    for (const ScoreRow& row : rows) {
        out << row.instance_id << '\t' << row.model_name << '\t' << row.task << '\t';
        if (row.score) {
            out << format_value(row.score->sc) << '\t' << format_value(row.score->pq)
                << '\t' << format_value(row.score->overall) << '\t'
                << parse_status_name(row.score->sc_provenance) << '\t'
                << parse_status_name(row.score->pq_provenance) << '\n';
        } else {
            out << "\t\t\t" << row.failure << '\t' << row.failure << '\n';
        }
    }
    write_file_text(path, out.str());
}

std::vector<ScoreRow> load_score_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open score table: " + path);
    std::vector<ScoreRow> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {  // column header
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            std::size_t tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (fields.size() != 8)
            throw std::runtime_error(path + ": malformed score row: " + line);
        ScoreRow row;
        row.instance_id = fields[0];
        row.model_name = fields[1];
        row.task = fields[2];
        if (!fields[3].empty()) {
            InstanceScore score;
            score.instance_id = row.instance_id;
            score.sc = std::stod(fields[3]);
            score.pq = std::stod(fields[4]);
            score.overall = std::stod(fields[5]);
            score.sc_provenance = fields[6] == "penalty_filled"
                                      ? ParseStatus::PenaltyFilled
                                      : ParseStatus::Parsed;
            score.pq_provenance = fields[7] == "penalty_filled"
                                      ? ParseStatus::PenaltyFilled
                                      : ParseStatus::Parsed;
            row.score = std::move(score);
        } else {
            row.failure = fields[6];
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<RateResult> run_rate(const RunConfig& config) {
    TemplateSet templates = TemplateSet::load_dir(config.templates_dir);
    std::vector<Manifest> manifests;
    for (const std::string& path : config.manifest_paths)
        manifests.push_back(load_manifest(path));

    const auto meta = build_run_meta(config, templates);
    const fs::path scores_dir = fs::path(config.output_dir) / "scores";
    const fs::path meta_dir = fs::path(config.output_dir) / "meta";
    fs::create_directories(scores_dir);
    fs::create_directories(meta_dir);

    auto rated = rate_all(config, templates, manifests, config.pq_with_inputs);

    std::vector<RateResult> results;
    for (const RatedTask& task : rated) {
        RateResult result;
        result.rows = to_score_rows(task);
        result.score_table_path = (scores_dir / (task.task + ".tsv")).string();
        write_score_table(result.score_table_path, result.rows, meta);
        results.push_back(std::move(result));
    }

    json run_meta_doc(meta);
    json checksums = json::object();
    for (const auto& [file, hash] : templates.checksums()) checksums[file] = hash;
    run_meta_doc["template_files"] = checksums;
    json manifest_list = json::array();
    for (const std::string& p : config.manifest_paths) manifest_list.push_back(p);
    run_meta_doc["manifests"] = manifest_list;
    write_file_text((meta_dir / "run.json").string(), run_meta_doc.dump(2) + "\n");
    return results;
}

namespace {

struct JoinedTask {
    std::string task;
    std::string method;
    std::vector<MhInput> mh_rows;  // non-dropped instances only
    std::vector<HhInput> hh_rows;  // all manifest instances
    const Manifest* manifest = nullptr;
};

std::vector<JoinedTask> join_tables(const std::vector<std::string>& score_table_paths,
                                    const std::vector<Manifest>& manifests,
                                    const std::string& method) {
    std::map<std::string, const InstanceRecord*> by_id;
    std::map<std::string, const Manifest*> manifest_of;
    for (const Manifest& m : manifests) {
        for (const InstanceRecord& rec : m.records) {
            by_id[rec.instance_id] = &rec;
            manifest_of[rec.instance_id] = &m;
        }
    }

    std::map<std::string, JoinedTask> by_task;
    for (const Manifest& m : manifests) {
        JoinedTask& jt = by_task[std::string(task_name(m.task))];
        jt.task = std::string(task_name(m.task));
        jt.method = method;
        jt.manifest = &m;
        for (const InstanceRecord& rec : m.records) {
            HhInput hh;
            hh.instance_id = rec.instance_id;
            hh.model_name = rec.model_name;
            hh.sc = rec.human.rater_scores_sc;
            hh.pq = rec.human.rater_scores_pq;
            jt.hh_rows.push_back(std::move(hh));
        }
    }

    std::set<std::string> covered;
    std::vector<std::string> unmatched;
    for (const std::string& path : score_table_paths) {
        for (const ScoreRow& row : load_score_table(path)) {
            auto it = by_id.find(row.instance_id);
            if (it == by_id.end()) {
                unmatched.push_back(row.instance_id);
                continue;
            }
            covered.insert(row.instance_id);
            if (!row.score) continue;  // dropped/failed: excluded from correlation
            const InstanceRecord& rec = *it->second;
            MhInput mh;
            mh.instance_id = row.instance_id;
            mh.model_name = rec.model_name;
            mh.metric_sc = row.score->sc;
            mh.metric_pq = row.score->pq;
            mh.metric_overall = row.score->overall;
            mh.human_sc = rec.human.sc_avg();
            mh.human_pq = rec.human.pq_avg();
            mh.human_overall = rec.human.overall();
            by_task[std::string(task_name(rec.task))].mh_rows.push_back(std::move(mh));
        }
    }
    for (const auto& [id, _] : by_id)
        if (!covered.count(id)) unmatched.push_back(id);
    if (!unmatched.empty()) {
        std::sort(unmatched.begin(), unmatched.end());
        std::string list;
        for (const std::string& id : unmatched) {
            if (!list.empty()) list += ", ";
            list += id;
        }
        throw JoinError("score tables and manifests do not join; unmatched ids: " +
                        list);
    }

    std::vector<JoinedTask> out;
    for (auto& [_, jt] : by_task) out.push_back(std::move(jt));
    return out;
}

}  // namespace

CorrelateResult run_correlate(const std::vector<std::string>& score_table_paths,
                              const std::vector<std::string>& manifest_paths,
                              const std::vector<std::string>& baseline_paths,
                              const std::string& output_dir,
                              const std::map<std::string, std::string>& run_meta) {
    std::vector<Manifest> manifests;
    for (const std::string& path : manifest_paths)
        manifests.push_back(load_manifest(path));

    std::string method = "viescore";
    if (auto it = run_meta.find("backend_model"); it != run_meta.end())
        method = "viescore:" + it->second;

    const fs::path reports_dir = fs::path(output_dir) / "reports";
    fs::create_directories(reports_dir);

    CorrelateResult result;
    auto joined = join_tables(score_table_paths, manifests, method);
    for (const JoinedTask& jt : joined) {
        CorrelationReport mh = mh_pipeline(jt.task, jt.method, jt.mh_rows);
        CorrelationReport hh = hh_pipeline(jt.task, jt.hh_rows);
        write_report_pair(reports_dir, "mh_" + jt.task, mh, run_meta);
        write_report_pair(reports_dir, "hh_" + jt.task, hh, run_meta);
        result.mh_reports.push_back(std::move(mh));
        result.hh_reports.push_back(std::move(hh));
    }

    if (!baseline_paths.empty()) {
        std::vector<BaselineScoreFile> files;
        for (const std::string& path : baseline_paths)
            files.push_back(load_baseline_file(path));
        for (const Manifest& manifest : manifests) {
            BaselineTable table = attach_baselines(manifest, files);
            std::map<std::string, const InstanceRecord*> by_id;
            for (const InstanceRecord& rec : manifest.records)
                by_id[rec.instance_id] = &rec;
            for (const std::string& metric : table.metric_names) {
                std::vector<MhInput> rows;
                for (const BaselineTable::Row& row : table.rows) {
                    auto vit = row.metric_values.find(metric);
                    if (vit == row.metric_values.end()) continue;
                    const InstanceRecord& rec = *by_id.at(row.instance_id);
                    MhInput mh;
                    mh.instance_id = row.instance_id;
                    mh.model_name = row.model_name;
                    mh.metric_sc = mh.metric_pq = mh.metric_overall = vit->second;
                    mh.human_sc = rec.human.sc_avg();
                    mh.human_pq = rec.human.pq_avg();
                    mh.human_overall = rec.human.overall();
                    rows.push_back(std::move(mh));
                }
                if (rows.empty()) continue;
                const std::string task(task_name(manifest.task));
                CorrelationReport report = mh_pipeline(task, metric, rows);
                write_report_pair(reports_dir, "baseline_" + metric + "_" + task,
                                  report, run_meta);
                result.baseline_reports.push_back(std::move(report));
            }
        }
    }

    result.mh_all_tasks = all_task_summary(result.mh_reports);
    result.hh_all_tasks = all_task_summary(result.hh_reports);
    {
        json doc = {{"mh_all_tasks", cell_to_json(result.mh_all_tasks)},
                    {"hh_all_tasks", cell_to_json(result.hh_all_tasks)},
                    {"meta", run_meta}};
        write_file_text((reports_dir / "all_tasks.json").string(), doc.dump(2) + "\n");
        std::ostringstream text;
        write_meta_header(text, run_meta);
        text << std::left << std::setw(28) << "" << std::setw(12) << "SC"
             << std::setw(12) << "PQ" << std::setw(12) << "Overall" << "\n";
        text << std::left << std::setw(28) << "M-H all tasks"
             << cell_text(result.mh_all_tasks) << "\n";
        text << std::left << std::setw(28) << "H-H all tasks"
             << cell_text(result.hh_all_tasks) << "\n";
        write_file_text((reports_dir / "all_tasks.txt").string(), text.str());
    }
    return result;
}

std::vector<RankingComparison> run_rank(
    const std::vector<std::string>& score_table_paths,
    const std::vector<std::string>& manifest_paths, const std::string& output_dir,
    const std::map<std::string, std::string>& run_meta) {
    std::vector<Manifest> manifests;
    for (const std::string& path : manifest_paths)
        manifests.push_back(load_manifest(path));
    auto joined = join_tables(score_table_paths, manifests, "viescore");

    auto rank_models =
        [](const std::map<std::string, std::pair<double, int>>& sums,
           bool* tie_flag) {
            std::vector<std::pair<std::string, double>> means;
            for (const auto& [model, acc] : sums)
                means.emplace_back(model, acc.first / acc.second);
            std::sort(means.begin(), means.end(), [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;  // deterministic tie-break
            });
            for (std::size_t i = 0; i + 1 < means.size(); ++i)
                if (means[i].second == means[i + 1].second) *tie_flag = true;
            std::vector<std::string> order;
            for (const auto& [model, _] : means) order.push_back(model);
            return order;
        };

    std::vector<RankingComparison> comparisons;
    for (const JoinedTask& jt : joined) {
        std::map<std::string, std::pair<double, int>> metric_sums, human_sums;
        for (const MhInput& row : jt.mh_rows) {
            auto& m = metric_sums[row.model_name];
            m.first += row.metric_overall;
            m.second += 1;
            auto& h = human_sums[row.model_name];
            h.first += row.human_overall;
            h.second += 1;
        }
        if (metric_sums.size() < 2)
            throw TooFewModels("task " + jt.task + " has fewer than 2 ranked models");

        RankingComparison cmp;
        cmp.task = jt.task;
        bool tie = false;
        cmp.method_ranking = rank_models(metric_sums, &tie);
        cmp.human_ranking = rank_models(human_sums, &tie);
        cmp.tie_broken = tie;
        cmp.footrule_distance = footrule(cmp.human_ranking, cmp.method_ranking);
        cmp.rho = ranking_rho(cmp.human_ranking, cmp.method_ranking);
        comparisons.push_back(std::move(cmp));
    }

    const fs::path reports_dir = fs::path(output_dir) / "reports";
    fs::create_directories(reports_dir);
    json doc = json::array();
    std::ostringstream text;
    write_meta_header(text, run_meta);
    for (const RankingComparison& cmp : comparisons) {
        doc.push_back({{"task", cmp.task},
                       {"human_ranking", cmp.human_ranking},
                       {"method_ranking", cmp.method_ranking},
                       {"footrule", cmp.footrule_distance},
                       {"rho", cmp.rho},
                       {"tie_broken", cmp.tie_broken}});
        text << cmp.task << ": d_SF=" << cmp.footrule_distance << " rho=" << std::fixed
             << std::setprecision(2) << cmp.rho
             << (cmp.tie_broken ? " (tie broken lexicographically)" : "") << "\n";
    }
    json wrapped = {{"rankings", doc}, {"meta", run_meta}};
    write_file_text((reports_dir / "ranking.json").string(), wrapped.dump(2) + "\n");
    write_file_text((reports_dir / "ranking.txt").string(), text.str());
    return comparisons;
}

std::vector<AblateResult> run_ablate_pq(const RunConfig& config) {
    TemplateSet templates = TemplateSet::load_dir(config.templates_dir);
    std::vector<Manifest> manifests;
    for (const std::string& path : config.manifest_paths)
        manifests.push_back(load_manifest(path));
    const auto meta = build_run_meta(config, templates);

    auto without_inputs = rate_all(config, templates, manifests, false);
    auto with_inputs = rate_all(config, templates, manifests, true);

    auto pq_task_level = [](const RatedTask& rated) -> std::optional<double> {
        std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>
            by_model;
        for (const RatedInstance& inst : rated.instances) {
            if (!inst.score) continue;
            auto& [metric, human] = by_model[inst.record->model_name];
            metric.push_back(inst.score->pq);
            human.push_back(inst.record->human.pq_avg());
        }
        std::vector<double> cells;
        for (const auto& [_, cols] : by_model) {
            if (cols.first.size() < 2) continue;
            if (auto r = spearman(cols.first, cols.second)) cells.push_back(*r);
        }
        if (cells.empty()) return std::nullopt;
        return fisher_z_mean(cells);
    };

    std::vector<AblateResult> results;
    for (std::size_t i = 0; i < without_inputs.size(); ++i) {
        AblateResult res;
        res.task = without_inputs[i].task;
        res.pq_without_inputs = pq_task_level(without_inputs[i]);
        res.pq_with_inputs = pq_task_level(with_inputs[i]);
        results.push_back(std::move(res));
    }

    if (!config.output_dir.empty()) {
        const fs::path reports_dir = fs::path(config.output_dir) / "reports";
        fs::create_directories(reports_dir);
        json doc = json::array();
        std::ostringstream text;
        write_meta_header(text, meta);
        auto opt = [](const std::optional<double>& v) {
            return v ? json(*v) : json(nullptr);
        };
        for (const AblateResult& res : results) {
            doc.push_back({{"task", res.task},
                           {"pq_without_inputs", opt(res.pq_without_inputs)},
                           {"pq_with_inputs", opt(res.pq_with_inputs)}});
            auto fmt = [](const std::optional<double>& v) {
                return v ? format_value(*v) : std::string("undefined");
            };
            text << res.task << ": without_inputs=" << fmt(res.pq_without_inputs)
                 << " with_inputs=" << fmt(res.pq_with_inputs) << "\n";
        }
        json wrapped = {{"pq_ablation", doc}, {"meta", meta}};
        write_file_text((reports_dir / "pq_ablation.json").string(),
                        wrapped.dump(2) + "\n");
        write_file_text((reports_dir / "pq_ablation.txt").string(), text.str());
    }
    return results;
}

}  // namespace viescore
