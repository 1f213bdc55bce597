#include "viescore/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace viescore {

namespace {

constexpr double kFisherClamp = 1.0 - 1e-7;

void check_pair(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw LengthMismatch("correlation inputs differ in length");
    if (x.size() < 2) throw LengthMismatch("correlation needs n >= 2");
}

bool is_constant(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double d) { return d == v.front(); });
}

std::map<std::string, int> rank_positions(const std::vector<std::string>& order) {
    std::map<std::string, int> ranks;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (!ranks.emplace(order[i], static_cast<int>(i) + 1).second)
            throw SetMismatch("ranking repeats model '" + order[i] + "'");
    }
    return ranks;
}

}  // namespace

std::vector<double> fractional_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
    check_pair(x, y);
    if (is_constant(x) || is_constant(y)) return std::nullopt;
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y) {
    check_pair(x, y);
    if (is_constant(x) || is_constant(y)) return std::nullopt;
    return pearson(fractional_ranks(x), fractional_ranks(y));
}

std::optional<double> kendall(const std::vector<double>& x, const std::vector<double>& y) {
    check_pair(x, y);
    if (is_constant(x) || is_constant(y)) return std::nullopt;
    const std::size_t n = x.size();
    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0.0 && dy == 0.0) continue;
            if (dx == 0.0)
                ++ties_x;
            else if (dy == 0.0)
                ++ties_y;
            else if ((dx > 0.0) == (dy > 0.0))
                ++concordant;
            else
                ++discordant;
        }
    }
    const double n0 = static_cast<double>(n) * (static_cast<double>(n) - 1) / 2.0;
    double tx = 0.0, ty = 0.0;
    {
        // tie-group corrections from value multiplicities
        auto tie_term = [](const std::vector<double>& v) {
            std::map<double, long long> counts;
            for (double d : v) ++counts[d];
            double t = 0.0;
            for (const auto& [_, c] : counts) t += static_cast<double>(c) * (c - 1) / 2.0;
            return t;
        };
        tx = tie_term(x);
        ty = tie_term(y);
    }
    const double denom = std::sqrt((n0 - tx) * (n0 - ty));
    return (static_cast<double>(concordant) - static_cast<double>(discordant)) / denom;
}

double fisher_z_mean(const std::vector<double>& correlations) {
    if (correlations.empty()) throw EmptyList("fisher_z_mean of empty list");
    double sum = 0.0;
    for (double r : correlations) {
        const double clamped = std::clamp(r, -kFisherClamp, kFisherClamp);
        sum += std::atanh(clamped);
    }
    return std::tanh(sum / static_cast<double>(correlations.size()));
}

int footrule(const std::vector<std::string>& r, const std::vector<std::string>& r_star) {
    const auto ra = rank_positions(r);
    const auto rb = rank_positions(r_star);
    if (ra.size() != rb.size()) throw SetMismatch("rankings cover different model sets");
    int total = 0;
    for (const auto& [model, rank] : ra) {
        auto it = rb.find(model);
        if (it == rb.end())
            throw SetMismatch("model '" + model + "' missing from second ranking");
        total += std::abs(rank - it->second);
    }
    return total;
}

double ranking_rho(const std::vector<std::string>& r,
                   const std::vector<std::string>& r_star) {
    const auto ra = rank_positions(r);
    const auto rb = rank_positions(r_star);
    if (ra.size() != rb.size()) throw SetMismatch("rankings cover different model sets");
    std::vector<double> va, vb;
    for (const auto& [model, rank] : ra) {
        auto it = rb.find(model);
        if (it == rb.end())
            throw SetMismatch("model '" + model + "' missing from second ranking");
        va.push_back(rank);
        vb.push_back(it->second);
    }
    auto rho = spearman(va, vb);
    if (!rho) throw SetMismatch("degenerate ranking comparison");
    return *rho;
}

double krippendorff_alpha(
    const std::vector<std::vector<std::optional<double>>>& ratings_by_rater) {
    if (ratings_by_rater.size() < 2)
        throw InsufficientOverlap("need at least two raters");
    const std::size_t units = ratings_by_rater.front().size();
    for (const auto& row : ratings_by_rater)
        if (row.size() != units) throw LengthMismatch("ragged ratings matrix");

    // observed disagreement over units with >= 2 ratings
    double d_o_sum = 0.0;
    double n_pairable = 0.0;
    std::vector<double> pooled;
    for (std::size_t u = 0; u < units; ++u) {
        std::vector<double> vals;
        for (const auto& row : ratings_by_rater)
            if (row[u]) vals.push_back(*row[u]);
        if (vals.size() < 2) continue;
        const double m = static_cast<double>(vals.size());
        double unit_sum = 0.0;
        for (std::size_t i = 0; i < vals.size(); ++i)
            for (std::size_t j = 0; j < vals.size(); ++j)
                if (i != j) unit_sum += (vals[i] - vals[j]) * (vals[i] - vals[j]);
        d_o_sum += unit_sum / (m - 1.0);
        n_pairable += m;
        pooled.insert(pooled.end(), vals.begin(), vals.end());
    }
    if (n_pairable < 2.0) throw InsufficientOverlap("no unit has two ratings");
    std::set<double> distinct(pooled.begin(), pooled.end());
    if (distinct.size() < 2)
        throw InsufficientOverlap("all pairable ratings share one value");

    const double d_o = d_o_sum / n_pairable;
    double d_e_sum = 0.0;
    for (double a : pooled)
        for (double b : pooled) d_e_sum += (a - b) * (a - b);
    const double d_e = d_e_sum / (n_pairable * (n_pairable - 1.0));
    return 1.0 - d_o / d_e;
}

namespace {

CorrelationCell fisher_aggregate(const std::vector<CorrelationCell>& cells) {
    CorrelationCell out;
    std::vector<double> sc, pq, ov;
    for (const auto& c : cells) {
        if (c.sc) sc.push_back(*c.sc);
        if (c.pq) pq.push_back(*c.pq);
        if (c.overall) ov.push_back(*c.overall);
    }
    if (!sc.empty()) out.sc = fisher_z_mean(sc);
    if (!pq.empty()) out.pq = fisher_z_mean(pq);
    if (!ov.empty()) out.overall = fisher_z_mean(ov);
    out.n = static_cast<int>(cells.size());
    return out;
}

}  // namespace

CorrelationReport mh_pipeline(const std::string& task, const std::string& method,
                              const std::vector<MhInput>& rows) {
    CorrelationReport report;
    report.task = task;
    report.method = method;

    std::map<std::string, std::vector<const MhInput*>> by_model;
    for (const auto& row : rows) by_model[row.model_name].push_back(&row);

    std::vector<CorrelationCell> model_cells;
    for (const auto& [model, group] : by_model) {
        CorrelationCell cell;
        cell.n = static_cast<int>(group.size());
        if (group.size() >= 2) {
            auto col = [&](auto metric_sel, auto human_sel) {
                std::vector<double> m, h;
                for (const MhInput* r : group) {
                    m.push_back(metric_sel(*r));
                    h.push_back(human_sel(*r));
                }
                return spearman(m, h);
            };
            cell.sc = col([](const MhInput& r) { return r.metric_sc; },
                          [](const MhInput& r) { return r.human_sc; });
            cell.pq = col([](const MhInput& r) { return r.metric_pq; },
                          [](const MhInput& r) { return r.human_pq; });
            cell.overall = col([](const MhInput& r) { return r.metric_overall; },
                               [](const MhInput& r) { return r.human_overall; });
        }
        model_cells.push_back(cell);
        report.per_model[model] = cell;
    }
    report.task_level = fisher_aggregate(model_cells);
    return report;
}

CorrelationReport hh_pipeline(const std::string& task, const std::vector<HhInput>& rows) {
    CorrelationReport report;
    report.task = task;
    report.method = "human_raters";

    std::map<std::string, std::vector<const HhInput*>> by_model;
    for (const auto& row : rows) by_model[row.model_name].push_back(&row);

    std::vector<CorrelationCell> model_cells;
    for (const auto& [model, group] : by_model) {
        CorrelationCell cell;
        cell.n = static_cast<int>(group.size());
        if (group.size() >= 2) {
            auto loo = [&](auto value_of_k, auto value_of_rest) -> std::optional<double> {
                std::vector<double> terms;
                for (int k = 0; k < 3; ++k) {
                    std::vector<double> held, rest;
                    for (const HhInput* r : group) {
                        held.push_back(value_of_k(*r, k));
                        rest.push_back(value_of_rest(*r, k));
                    }
                    if (auto c = spearman(held, rest)) terms.push_back(*c);
                }
                if (terms.empty()) return std::nullopt;
                return fisher_z_mean(terms);
            };
            auto mean_rest = [](const std::array<double, 3>& v, int k) {
                return (v[0] + v[1] + v[2] - v[static_cast<std::size_t>(k)]) / 2.0;
            };
            cell.sc = loo(
                [](const HhInput& r, int k) { return r.sc[static_cast<std::size_t>(k)]; },
                [&](const HhInput& r, int k) { return mean_rest(r.sc, k); });
            cell.pq = loo(
                [](const HhInput& r, int k) { return r.pq[static_cast<std::size_t>(k)]; },
                [&](const HhInput& r, int k) { return mean_rest(r.pq, k); });
            cell.overall = loo(
                [](const HhInput& r, int k) {
                    return std::sqrt(r.sc[static_cast<std::size_t>(k)] *
                                     r.pq[static_cast<std::size_t>(k)]);
                },
                [&](const HhInput& r, int k) {
                    return std::sqrt(mean_rest(r.sc, k) * mean_rest(r.pq, k));
                });
        }
        model_cells.push_back(cell);
        report.per_model[model] = cell;
    }
    report.task_level = fisher_aggregate(model_cells);
    return report;
}

CorrelationCell all_task_summary(const std::vector<CorrelationReport>& reports) {
    std::vector<CorrelationCell> cells;
    cells.reserve(reports.size());
    for (const auto& r : reports) cells.push_back(r.task_level);
    return fisher_aggregate(cells);
}

}  // namespace viescore
