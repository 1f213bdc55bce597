#pragma once

// Independent brute-force reference implementations of the correlation
// statistics. Deliberately written against the textbook definitions, with no
// code shared with the library, so the two can cross-check each other.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace oracle {

inline bool constant(const std::vector<double>& v) {
    for (double d : v)
        if (d != v.front()) return false;
    return true;
}

inline std::optional<double> pearson(const std::vector<double>& x,
                                     const std::vector<double>& y) {
    if (constant(x) || constant(y)) return std::nullopt;
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double num = 0.0, dx2 = 0.0, dy2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (x[i] - mx) * (y[i] - my);
        dx2 += (x[i] - mx) * (x[i] - mx);
        dy2 += (y[i] - my) * (y[i] - my);
    }
    return num / std::sqrt(dx2 * dy2);
}

/// O(n^2) mid-rank computation: rank_i = 1 + #{j: v_j < v_i} + #{j != i: v_j == v_i}/2.
inline std::vector<double> midranks(const std::vector<double>& v) {
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double less = 0.0, equal = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) less += 1.0;
            if (j != i && v[j] == v[i]) equal += 1.0;
        }
        ranks[i] = 1.0 + less + equal / 2.0;
    }
    return ranks;
}

inline std::optional<double> spearman(const std::vector<double>& x,
                                      const std::vector<double>& y) {
    if (constant(x) || constant(y)) return std::nullopt;
    return pearson(midranks(x), midranks(y));
}

/// Tau-b from pairwise concordance counts and tie corrections.
inline std::optional<double> kendall_tau_b(const std::vector<double>& x,
                                           const std::vector<double>& y) {
    if (constant(x) || constant(y)) return std::nullopt;
    const std::size_t n = x.size();
    double concordant = 0.0, discordant = 0.0, tied_x = 0.0, tied_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = x[i] - x[j];
            const double b = y[i] - y[j];
            if (a == 0.0 && b == 0.0) {
                tied_x += 1.0;
                tied_y += 1.0;
            } else if (a == 0.0) {
                tied_x += 1.0;
            } else if (b == 0.0) {
                tied_y += 1.0;
            } else if (a * b > 0.0) {
                concordant += 1.0;
            } else {
                discordant += 1.0;
            }
        }
    }
    const double n0 = static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0;
    return (concordant - discordant) /
           std::sqrt((n0 - tied_x) * (n0 - tied_y));
}

}  // namespace oracle
