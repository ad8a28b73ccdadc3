#pragma once
// Entropy analytics and temporal prediction.
//
// Item popularity p_i is, by default, the fraction of users holding item i
// (library inclusion), so one user tagging the same item many times does
// not inflate it; counting raw assignments instead is a config switch.
// Entropy is Shannon entropy of that distribution, base 2 by default.
//
// The hit-ratio harness replays the trace: at each window boundary T it
// rebuilds the interest graph from everything at or before T and asks, for
// every item a user first adds in (T, T+granularity], whether some
// neighbor already held it at T.

#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "folkstat/community.hpp"
#include "folkstat/errors.hpp"
#include "folkstat/interest_graph.hpp"
#include "folkstat/rng.hpp"

namespace folkstat {

enum class PopularityMode { distinct_users, raw_assignments };

struct PopularityDistribution {
    // (item, count) sorted by item ordinal; every count >= 1.
    std::vector<std::pair<ItemId, std::uint64_t>> counts;
    std::uint64_t total = 0;

    std::size_t num_items() const { return counts.size(); }
};

struct EntropyPoint {
    std::int64_t period_end = 0;
    double entropy = 0.0;
    std::size_t num_items = 0;
};

enum class NeighborhoodMode {
    interest_graph,
    largest_component_total,
    random_component,
    random_graph,
};

inline const char* to_string(NeighborhoodMode m) {
    switch (m) {
    case NeighborhoodMode::interest_graph: return "interest_graph";
    case NeighborhoodMode::largest_component_total: return "largest_component_total";
    case NeighborhoodMode::random_component: return "random_component";
    case NeighborhoodMode::random_graph: return "random_graph";
    }
    return "?";
}

inline std::optional<NeighborhoodMode> neighborhood_mode_from_string(std::string_view s) {
    if (s == "interest_graph")
        return NeighborhoodMode::interest_graph;
    if (s == "largest_component_total")
        return NeighborhoodMode::largest_component_total;
    if (s == "random_component")
        return NeighborhoodMode::random_component;
    if (s == "random_graph")
        return NeighborhoodMode::random_graph;
    return std::nullopt;
}

struct NeighborhoodEntropyReport {
    double threshold = 0.0;
    NeighborhoodMode mode = NeighborhoodMode::interest_graph;
    double mean = 0.0;
    double ci95_half_width = 0.0;
    std::size_t users_measured = 0;
    // Spread of the per-trial population means (random modes, trials >= 2).
    double trial_spread = 0.0;
};

struct HitRatioWindow {
    std::int64_t window_start = 0; // exclusive
    std::int64_t window_end = 0;   // inclusive
    std::uint64_t adds = 0;
    std::uint64_t hits = 0;
};

struct HitRatioReport {
    std::int64_t granularity = 0;
    std::size_t windows_evaluated = 0;
    std::uint64_t adds_total = 0;
    std::uint64_t hits_total = 0;
    std::optional<double> hit_ratio; // empty when adds_total == 0
    std::vector<HitRatioWindow> windows;
};

inline double entropy(const PopularityDistribution& d, double log_base = 2.0) {
    if (d.counts.empty())
        throw empty_input_error("entropy of an empty distribution");
    if (!(log_base > 1.0))
        throw domain_error("entropy log base must exceed 1");

    const double total = static_cast<double>(d.total);
    double h = 0.0;
    if (log_base == 2.0) {
        for (const auto& [item, count] : d.counts) {
            const double p = static_cast<double>(count) / total;
            h -= p * std::log2(p);
        }
    } else {
        const double scale = 1.0 / std::log(log_base);
        for (const auto& [item, count] : d.counts) {
            const double p = static_cast<double>(count) / total;
            h -= p * std::log(p) * scale;
        }
    }
    return h;
}

// First (user, item) events in timestamp order: the moments items enter
// user libraries. Re-taggings of an owned item do not appear.
struct LibraryEvent {
    std::int64_t timestamp = 0;
    UserId user;
    ItemId item;
};

inline std::vector<LibraryEvent> library_events(const Community& c) {
    std::vector<LibraryEvent> events;
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(c.assignments().size());
    for (const TagAssignment& a : c.assignments()) {
        const std::uint64_t key =
            (static_cast<std::uint64_t>(a.user.value) << 32) | a.item.value;
        if (seen.insert(key).second)
            events.push_back({a.timestamp, a.user, a.item});
    }
    return events;
}

inline PopularityDistribution item_popularity(const Community& c,
                                              std::optional<std::int64_t> until = std::nullopt,
                                              PopularityMode mode = PopularityMode::distinct_users) {
    if (c.empty())
        throw empty_input_error("item popularity of an empty community");

    std::vector<std::uint64_t> counts(c.num_items(), 0);
    if (mode == PopularityMode::distinct_users) {
        for (const LibraryEvent& e : library_events(c)) {
            if (until && e.timestamp > *until)
                break;
            ++counts[e.item.value];
        }
    } else {
        for (const TagAssignment& a : c.assignments()) {
            if (until && a.timestamp > *until)
                break;
            ++counts[a.item.value];
        }
    }

    PopularityDistribution d;
    for (std::uint32_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) {
            d.counts.emplace_back(ItemId{i}, counts[i]);
            d.total += counts[i];
        }
    }
    if (d.counts.empty())
        throw empty_input_error("no assignments at or before the requested time");
    return d;
}

// One point per interval boundary, starting one interval after the first
// assignment; the last point is the first boundary covering the final
// assignment, so it equals the unfiltered entropy.
inline std::vector<EntropyPoint> entropy_timeline(const Community& c, std::int64_t interval,
                                                  double log_base = 2.0,
                                                  PopularityMode mode = PopularityMode::distinct_users) {
    if (c.empty())
        throw empty_input_error("entropy timeline of an empty community");
    if (interval <= 0)
        throw domain_error("timeline interval must be positive");

    const std::int64_t first = c.assignments().front().timestamp;
    const std::int64_t last = c.assignments().back().timestamp;

    std::vector<EntropyPoint> points;
    for (std::int64_t boundary = first + interval;; boundary += interval) {
        const auto d = item_popularity(c, boundary, mode);
        points.push_back({boundary, entropy(d, log_base), d.num_items()});
        if (boundary >= last)
            break;
    }
    return points;
}

namespace detail {

// Pooled popularity over a set of users: count_i = how many of them hold
// item i. Returns empty when the users hold nothing (impossible for
// community members, possible for an empty user list).
inline PopularityDistribution pooled_popularity(const Community& c,
                                                std::span<const std::uint32_t> users) {
    std::unordered_map<std::uint32_t, std::uint64_t> counts;
    for (std::uint32_t u : users)
        for (ItemId i : c.items_of(UserId{u}))
            ++counts[i.value];

    PopularityDistribution d;
    d.counts.reserve(counts.size());
    for (const auto& [item, count] : counts)
        d.counts.emplace_back(ItemId{item}, count);
    std::sort(d.counts.begin(), d.counts.end(),
              [](const auto& a, const auto& b) { return a.first.value < b.first.value; });
    for (const auto& [item, count] : d.counts)
        d.total += count;
    return d;
}

inline double sample_stddev(std::span<const double> xs) {
    if (xs.size() < 2)
        return 0.0;
    double mean = 0.0;
    for (double x : xs)
        mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

} // namespace detail

// Entropy of the union of u's neighbors' libraries (out-neighbors in a
// directed graph); u itself is not part of the union.
inline double neighborhood_entropy(const Community& c, const InterestGraph& g, UserId u,
                                   double log_base = 2.0) {
    if (u.value >= g.num_nodes())
        throw unknown_entity_error("user ordinal outside graph");
    const auto neighbors = g.out_neighbors(u.value);
    if (neighbors.empty())
        throw no_neighbors_error("user " + c.label(u) + " has no neighbors at this threshold");

    std::vector<std::uint32_t> ids;
    ids.reserve(neighbors.size());
    for (const Neighbor& nb : neighbors)
        ids.push_back(nb.to);
    return entropy(detail::pooled_popularity(c, ids), log_base);
}

inline NeighborhoodEntropyReport
average_neighborhood_entropy(const Community& c, const InterestGraph& g, NeighborhoodMode mode,
                             std::size_t trials = 1, std::uint64_t seed = 0,
                             double log_base = 2.0) {
    NeighborhoodEntropyReport report;
    report.threshold = g.threshold.value();
    report.mode = mode;

    std::vector<std::uint32_t> measured; // users with at least one (out-)neighbor
    for (std::uint32_t u = 0; u < g.num_nodes(); ++u)
        if (!g.out_neighbors(u).empty())
            measured.push_back(u);

    if (mode == NeighborhoodMode::largest_component_total) {
        detail::DisjointSet ds(g.num_nodes());
        for (std::uint32_t u = 0; u < g.num_nodes(); ++u)
            for (const Neighbor& nb : g.adjacency[u])
                ds.unite(u, nb.to);
        std::vector<std::size_t> size(g.num_nodes(), 0);
        for (std::uint32_t u = 0; u < g.num_nodes(); ++u)
            if (!g.is_isolated(u))
                ++size[ds.find(u)];
        std::uint32_t best_root = 0;
        std::size_t best_size = 0;
        for (std::uint32_t r = 0; r < size.size(); ++r) {
            if (size[r] > best_size) {
                best_size = size[r];
                best_root = r;
            }
        }
        if (best_size == 0)
            throw empty_input_error("graph has no non-isolated nodes");
        std::vector<std::uint32_t> members;
        members.reserve(best_size);
        for (std::uint32_t u = 0; u < g.num_nodes(); ++u)
            if (!g.is_isolated(u) && ds.find(u) == best_root)
                members.push_back(u);
        report.mean = entropy(detail::pooled_popularity(c, members), log_base);
        report.users_measured = members.size();
        return report;
    }

    if (measured.empty())
        throw empty_input_error("graph has no users with neighbors");

    std::vector<double> per_user;
    per_user.reserve(measured.size());

    if (mode == NeighborhoodMode::interest_graph) {
        for (std::uint32_t u : measured)
            per_user.push_back(neighborhood_entropy(c, g, UserId{u}, log_base));
    } else {
        if (trials < 1)
            throw validation_error("random baselines need trials >= 1");

        std::vector<std::uint32_t> pool;
        if (mode == NeighborhoodMode::random_graph) {
            pool.resize(g.num_nodes());
            for (std::uint32_t u = 0; u < g.num_nodes(); ++u)
                pool[u] = u;
        } else {
            detail::DisjointSet ds(g.num_nodes());
            for (std::uint32_t u = 0; u < g.num_nodes(); ++u)
                for (const Neighbor& nb : g.adjacency[u])
                    ds.unite(u, nb.to);
            std::vector<std::size_t> size(g.num_nodes(), 0);
            for (std::uint32_t u = 0; u < g.num_nodes(); ++u)
                if (!g.is_isolated(u))
                    ++size[ds.find(u)];
            std::uint32_t best_root = 0;
            std::size_t best_size = 0;
            for (std::uint32_t r = 0; r < size.size(); ++r) {
                if (size[r] > best_size) {
                    best_size = size[r];
                    best_root = r;
                }
            }
            if (best_size == 0)
                throw empty_input_error("graph has no non-isolated nodes");
            for (std::uint32_t u = 0; u < g.num_nodes(); ++u)
                if (!g.is_isolated(u) && ds.find(u) == best_root)
                    pool.push_back(u);
        }

        const Rng root(seed);
        std::vector<double> trial_means(trials, 0.0);
        std::vector<std::uint32_t> candidates;
        std::vector<std::uint32_t> sampled;
        for (std::uint32_t u : measured) {
            const std::size_t degree = g.out_neighbors(u).size();
            candidates.clear();
            for (std::uint32_t v : pool)
                if (v != u)
                    candidates.push_back(v);
            const std::size_t draw = std::min(degree, candidates.size());
            if (draw == 0)
                throw empty_input_error("random pool is empty");

            double acc = 0.0;
            for (std::size_t trial = 0; trial < trials; ++trial) {
                // Substream per (user, trial): results do not depend on
                // evaluation order.
                Rng rng = root.derive((static_cast<std::uint64_t>(u) << 24) ^ trial);
                std::vector<std::uint32_t> deck = candidates;
                sampled.clear();
                for (std::size_t d = 0; d < draw; ++d) {
                    const std::size_t pick =
                        d + static_cast<std::size_t>(rng.below(deck.size() - d));
                    std::swap(deck[d], deck[pick]);
                    sampled.push_back(deck[d]);
                }
                const double h = entropy(detail::pooled_popularity(c, sampled), log_base);
                acc += h;
                trial_means[trial] += h;
            }
            per_user.push_back(acc / static_cast<double>(trials));
        }
        for (double& m : trial_means)
            m /= static_cast<double>(measured.size());
        report.trial_spread = detail::sample_stddev(trial_means);
    }

    double mean = 0.0;
    for (double v : per_user)
        mean += v;
    mean /= static_cast<double>(per_user.size());
    report.mean = mean;
    report.ci95_half_width = 1.96 * detail::sample_stddev(per_user) /
                             std::sqrt(static_cast<double>(per_user.size()));
    report.users_measured = per_user.size();
    return report;
}

// Temporal replay: the proportion of first-time additions in each window
// (T, T+granularity] that were already present in some neighbor's library
// at T, with the graph rebuilt from scratch at every boundary.
inline HitRatioReport hit_ratio(const Community& c, SimilarityKind kind, Rational threshold,
                                std::int64_t granularity, unsigned threads = 1) {
    require_threshold_in_range(threshold);
    if (granularity <= 0)
        throw domain_error("granularity must be positive");
    if (c.empty())
        throw empty_input_error("hit ratio of an empty community");

    const std::int64_t first = c.assignments().front().timestamp;
    const std::int64_t last = c.assignments().back().timestamp;
    if (last <= first)
        throw span_too_short_error("trace spans a single instant; nothing to forecast");

    const auto events = library_events(c);
    const std::size_t num_windows =
        static_cast<std::size_t>((last - first + granularity - 1) / granularity);

    HitRatioReport report;
    report.granularity = granularity;
    report.windows_evaluated = num_windows;
    report.windows.resize(num_windows);

    auto run = [&](std::size_t begin, std::size_t end) {
        for (std::size_t w = begin; w < end; ++w) {
            const std::int64_t window_start = first + static_cast<std::int64_t>(w) * granularity;
            const std::int64_t window_end = window_start + granularity;

            GraphOptions opt;
            opt.until = window_start;
            const InterestGraph g = build_graph(c, kind, threshold, opt);
            const auto libraries =
                detail::project(c, SimilarityKind::user_item, window_start).user_sets;

            HitRatioWindow& out = report.windows[w];
            out.window_start = window_start;
            out.window_end = window_end;

            auto lo = std::lower_bound(events.begin(), events.end(), window_start,
                                       [](const LibraryEvent& e, std::int64_t t) {
                                           return e.timestamp <= t;
                                       });
            for (auto it = lo; it != events.end() && it->timestamp <= window_end; ++it) {
                ++out.adds;
                for (const Neighbor& nb : g.out_neighbors(it->user.value)) {
                    const auto& lib = libraries[nb.to];
                    if (std::binary_search(lib.begin(), lib.end(), it->item.value)) {
                        ++out.hits;
                        break;
                    }
                }
            }
        }
    };

    if (threads <= 1 || num_windows <= 1) {
        run(0, num_windows);
    } else {
        const unsigned workers = std::min<unsigned>(threads, num_windows);
        const std::size_t chunk = (num_windows + workers - 1) / workers;
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) {
            const std::size_t begin = std::min(num_windows, t * chunk);
            const std::size_t end = std::min(num_windows, begin + chunk);
            if (begin < end)
                pool.emplace_back(run, begin, end);
        }
        for (auto& t : pool)
            t.join();
    }

    for (const HitRatioWindow& w : report.windows) {
        report.adds_total += w.adds;
        report.hits_total += w.hits;
    }
    if (report.adds_total > 0)
        report.hit_ratio = static_cast<double>(report.hits_total) /
                           static_cast<double>(report.adds_total);
    return report;
}

} // namespace folkstat
