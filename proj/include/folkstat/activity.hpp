#pragma once
// Per-user activity analytics: rank distributions, Pearson R^2, and
// Hoerl-curve fits.
//
// The Hoerl family f(x) = a * b^x * x^c is linear in (ln a, ln b, c) after
// taking logs:  ln f(x) = ln a + x ln b + c ln x.  The fit is therefore an
// ordinary least-squares regression on the basis [1, x, ln x] against
// ln(value) -- closed form, no initialization, deterministic.  r2_log is
// the R^2 of that regression, i.e. goodness of fit in log space.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "folkstat/community.hpp"
#include "folkstat/errors.hpp"

namespace folkstat {

enum class ActivityMetric { tag_assignments, library_size, vocabulary_size };

inline const char* to_string(ActivityMetric m) {
    switch (m) {
    case ActivityMetric::tag_assignments: return "tag_assignments";
    case ActivityMetric::library_size: return "library_size";
    case ActivityMetric::vocabulary_size: return "vocabulary_size";
    }
    return "?";
}

struct RankPoint {
    std::uint32_t rank = 0;  // 1-based, contiguous
    std::uint64_t value = 0; // non-increasing with rank
};

struct RankDistribution {
    ActivityMetric metric = ActivityMetric::tag_assignments;
    std::vector<RankPoint> points;
};

struct HoerlParams {
    double a = 1.0;
    double b = 1.0;
    double c = 0.0;
};

struct FitReport {
    HoerlParams params;
    double r2_log = 0.0;
    std::size_t n_points = 0;
};

// Raw per-user metric values indexed by user ordinal.
inline std::vector<std::uint64_t> user_metric_values(const Community& c, ActivityMetric metric) {
    if (c.empty())
        throw empty_input_error("metric values of an empty community");
    std::vector<std::uint64_t> values(c.num_users(), 0);
    switch (metric) {
    case ActivityMetric::tag_assignments:
        for (const TagAssignment& a : c.assignments())
            ++values[a.user.value];
        break;
    case ActivityMetric::library_size:
        for (std::uint32_t u = 0; u < c.num_users(); ++u)
            values[u] = c.items_of(UserId{u}).size();
        break;
    case ActivityMetric::vocabulary_size:
        for (std::uint32_t u = 0; u < c.num_users(); ++u)
            values[u] = c.tags_of(UserId{u}).size();
        break;
    }
    return values;
}

// Users sorted by descending metric value, ties by ascending ordinal so
// rank plots are reproducible byte for byte.
inline RankDistribution rank_distribution(const Community& c, ActivityMetric metric) {
    const auto values = user_metric_values(c, metric);
    std::vector<std::uint32_t> order(values.size());
    for (std::uint32_t u = 0; u < order.size(); ++u)
        order[u] = u;
    std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
        if (values[x] != values[y])
            return values[x] > values[y];
        return x < y;
    });

    RankDistribution dist;
    dist.metric = metric;
    dist.points.reserve(order.size());
    for (std::uint32_t r = 0; r < order.size(); ++r)
        dist.points.push_back({r + 1, values[order[r]]});
    return dist;
}

// Square of the Pearson correlation coefficient.
inline double correlation_r2(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw validation_error("correlation inputs differ in length");
    const std::size_t n = xs.size();
    if (n < 2)
        throw degenerate_input_error("correlation needs at least 2 points");

    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mean_x;
        const double dy = ys[i] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw degenerate_input_error("correlation of a constant sequence");
    return (sxy * sxy) / (sxx * syy);
}

inline double eval_hoerl(const HoerlParams& p, double x) {
    if (!(x > 0.0))
        throw domain_error("hoerl function is defined for x > 0");
    return p.a * std::pow(p.b, x) * std::pow(x, p.c);
}

namespace detail {

// Solves the 3x3 system M beta = rhs by Gaussian elimination with partial
// pivoting, in long double. Throws on a (near-)singular matrix.
inline std::array<long double, 3> solve3(std::array<std::array<long double, 3>, 3> m,
                                         std::array<long double, 3> rhs) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::fabs(static_cast<double>(m[row][col])) >
                std::fabs(static_cast<double>(m[pivot][col])))
                pivot = row;
        std::swap(m[col], m[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        if (m[col][col] == 0.0L || !std::isfinite(static_cast<double>(m[col][col])))
            throw rank_deficiency_error("singular design matrix in hoerl fit");
        for (int row = col + 1; row < 3; ++row) {
            const long double f = m[row][col] / m[col][col];
            for (int k = col; k < 3; ++k)
                m[row][k] -= f * m[col][k];
            rhs[row] -= f * rhs[col];
        }
    }
    std::array<long double, 3> beta{};
    for (int row = 2; row >= 0; --row) {
        long double acc = rhs[row];
        for (int k = row + 1; k < 3; ++k)
            acc -= m[row][k] * beta[k];
        beta[row] = acc / m[row][row];
    }
    return beta;
}

} // namespace detail

inline FitReport fit_hoerl(const RankDistribution& dist) {
    const auto& pts = dist.points;
    if (pts.size() < 3)
        throw rank_deficiency_error("hoerl fit needs at least 3 points");

    std::size_t distinct = 1;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].rank != pts[i - 1].rank)
            ++distinct;
    if (distinct < 3)
        throw rank_deficiency_error("hoerl fit needs at least 3 distinct ranks");

    // Normal equations over the basis [1, x, ln x], accumulated in long
    // double; one refinement pass keeps noiseless round trips near machine
    // precision even for x up to a few thousand.
    std::array<std::array<long double, 3>, 3> m{};
    std::array<long double, 3> rhs{};
    for (const RankPoint& p : pts) {
        if (p.rank == 0)
            throw domain_error("rank must be positive");
        if (p.value == 0)
            throw domain_error("rank distribution value must be positive");
        const long double x = static_cast<long double>(p.rank);
        const long double lx = std::log(x);
        const long double ly = std::log(static_cast<long double>(p.value));
        const std::array<long double, 3> row{1.0L, x, lx};
        for (int i = 0; i < 3; ++i) {
            rhs[i] += row[i] * ly;
            for (int j = 0; j < 3; ++j)
                m[i][j] += row[i] * row[j];
        }
    }

    auto beta = detail::solve3(m, rhs);
    {
        // Iterative refinement: r = rhs - M beta, beta += M^-1 r.
        std::array<long double, 3> r = rhs;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r[i] -= m[i][j] * beta[j];
        auto delta = detail::solve3(m, r);
        for (int i = 0; i < 3; ++i)
            beta[i] += delta[i];
    }

    FitReport report;
    report.params.a = static_cast<double>(std::exp(beta[0]));
    report.params.b = static_cast<double>(std::exp(beta[1]));
    report.params.c = static_cast<double>(beta[2]);
    report.n_points = pts.size();

    long double mean_ly = 0.0L;
    for (const RankPoint& p : pts)
        mean_ly += std::log(static_cast<long double>(p.value));
    mean_ly /= static_cast<long double>(pts.size());

    long double ss_tot = 0.0L, ss_res = 0.0L;
    for (const RankPoint& p : pts) {
        const long double x = static_cast<long double>(p.rank);
        const long double ly = std::log(static_cast<long double>(p.value));
        const long double fit = beta[0] + beta[1] * x + beta[2] * std::log(x);
        ss_tot += (ly - mean_ly) * (ly - mean_ly);
        ss_res += (ly - fit) * (ly - fit);
    }
    // Flat data: the basis contains the constant, so the fit is exact and
    // R^2 is reported as 1.
    report.r2_log =
        ss_tot > 0.0L ? static_cast<double>(1.0L - ss_res / ss_tot) : 1.0;
    return report;
}

} // namespace folkstat
