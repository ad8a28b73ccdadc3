#pragma once
// Interest-sharing graphs.
//
// Nodes are users; an edge exists where a pairwise similarity ratio
// strictly exceeds the threshold t:
//   user_item          |I_k & I_j| / |I_k | I_j|   (undirected, Jaccard)
//   user_tag           |T_k & T_j| / |T_k | T_j|   (undirected, Jaccard)
//   directed_user_item |I_k & I_j| / |I_k|         (edge points from k)
//
// Construction never enumerates all user pairs: candidates are generated
// from the item->users (or tag->users) inverted index, so two users who
// share nothing are never compared.  Edge tests are exact integer
// comparisons against a rational threshold (see rational.hpp).
//
// Pair generation can be partitioned across threads; each pair is owned
// by its lower-ordinal endpoint and per-user candidate lists are sorted,
// so the result is identical for any worker count.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include "folkstat/community.hpp"
#include "folkstat/errors.hpp"
#include "folkstat/rational.hpp"

namespace folkstat {

enum class SimilarityKind { user_item, user_tag, directed_user_item };

inline bool is_directed(SimilarityKind k) { return k == SimilarityKind::directed_user_item; }

inline const char* to_string(SimilarityKind k) {
    switch (k) {
    case SimilarityKind::user_item: return "user_item";
    case SimilarityKind::user_tag: return "user_tag";
    case SimilarityKind::directed_user_item: return "directed_user_item";
    }
    return "?";
}

inline std::optional<SimilarityKind> similarity_kind_from_string(std::string_view s) {
    if (s == "user_item")
        return SimilarityKind::user_item;
    if (s == "user_tag")
        return SimilarityKind::user_tag;
    if (s == "directed_user_item")
        return SimilarityKind::directed_user_item;
    return std::nullopt;
}

struct Neighbor {
    std::uint32_t to = 0;
    double similarity = 0.0;
};

struct InterestGraph {
    SimilarityKind kind = SimilarityKind::user_item;
    Rational threshold{0, 1};
    bool directed = false;
    // Out-adjacency (symmetric for undirected kinds), sorted by ordinal.
    std::vector<std::vector<Neighbor>> adjacency;
    std::vector<std::uint32_t> in_degree; // directed graphs only

    std::size_t num_nodes() const { return adjacency.size(); }

    std::size_t degree(std::uint32_t u) const {
        return adjacency[u].size() + (directed ? in_degree[u] : 0);
    }
    bool is_isolated(std::uint32_t u) const { return degree(u) == 0; }

    std::span<const Neighbor> out_neighbors(std::uint32_t u) const { return adjacency[u]; }

    // Undirected edges counted once.
    std::size_t num_edges() const {
        std::size_t total = 0;
        for (const auto& adj : adjacency)
            total += adj.size();
        return directed ? total : total / 2;
    }
};

struct ComponentSummary {
    std::size_t components_excluding_isolated = 0;
    std::size_t isolated_count = 0;
    std::size_t largest_component_size = 0;
    std::size_t nonisolated_node_count = 0;

    friend bool operator==(const ComponentSummary&, const ComponentSummary&) = default;
};

struct GraphOptions {
    // Restrict libraries/vocabularies to assignments with timestamp <= until.
    std::optional<std::int64_t> until;
    unsigned threads = 1;
};

namespace detail {

// Per-user entity sets plus the entity->users inverted index, both as raw
// ordinals, optionally restricted in time.
struct Projection {
    std::vector<std::vector<std::uint32_t>> user_sets;
    std::vector<std::vector<std::uint32_t>> inverted;
};

inline Projection project(const Community& c, SimilarityKind kind,
                          std::optional<std::int64_t> until) {
    const bool by_tag = kind == SimilarityKind::user_tag;
    Projection p;
    p.user_sets.resize(c.num_users());
    p.inverted.resize(by_tag ? c.num_tags() : c.num_items());

    if (!until) {
        for (std::uint32_t u = 0; u < c.num_users(); ++u) {
            auto& set = p.user_sets[u];
            if (by_tag)
                for (TagId t : c.tags_of(UserId{u}))
                    set.push_back(t.value);
            else
                for (ItemId i : c.items_of(UserId{u}))
                    set.push_back(i.value);
        }
    } else {
        for (const TagAssignment& a : c.assignments()) {
            if (a.timestamp > *until)
                break; // assignments are timestamp-sorted
            p.user_sets[a.user.value].push_back(by_tag ? a.tag.value : a.item.value);
        }
        for (auto& set : p.user_sets) {
            std::sort(set.begin(), set.end());
            set.erase(std::unique(set.begin(), set.end()), set.end());
        }
    }
    for (std::uint32_t u = 0; u < p.user_sets.size(); ++u)
        for (std::uint32_t e : p.user_sets[u])
            p.inverted[e].push_back(u);
    return p;
}

// Co-occurring user pair with intersection size; lo < hi.
struct PairStat {
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
    std::uint32_t inter = 0;
};

// All pairs of users sharing at least one entity, each discovered from its
// lower endpoint. Output is sorted by (lo, hi) for any thread count.
inline std::vector<PairStat> co_occurring_pairs(const Projection& p, unsigned threads) {
    const std::uint32_t n = static_cast<std::uint32_t>(p.user_sets.size());
    if (threads == 0)
        threads = 1;
    const unsigned workers = std::min<unsigned>(threads, n == 0 ? 1 : n);

    std::vector<std::vector<PairStat>> partial(workers);
    auto run = [&](unsigned w, std::uint32_t begin, std::uint32_t end) {
        std::vector<std::uint32_t> count(n, 0);
        std::vector<std::uint32_t> touched;
        auto& out = partial[w];
        for (std::uint32_t k = begin; k < end; ++k) {
            for (std::uint32_t e : p.user_sets[k]) {
                const auto& users = p.inverted[e];
                // users is sorted; only pairs with hi > k are owned here
                for (auto it = std::upper_bound(users.begin(), users.end(), k);
                     it != users.end(); ++it) {
                    if (count[*it]++ == 0)
                        touched.push_back(*it);
                }
            }
            std::sort(touched.begin(), touched.end());
            for (std::uint32_t j : touched) {
                out.push_back({k, j, count[j]});
                count[j] = 0;
            }
            touched.clear();
        }
    };

    if (workers <= 1) {
        run(0, 0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint32_t chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint32_t begin = std::min(n, w * chunk);
            const std::uint32_t end = std::min(n, begin + chunk);
            if (begin < end)
                pool.emplace_back(run, w, begin, end);
        }
        for (auto& t : pool)
            t.join();
    }

    std::vector<PairStat> pairs;
    std::size_t total = 0;
    for (const auto& part : partial)
        total += part.size();
    pairs.reserve(total);
    for (const auto& part : partial)
        pairs.insert(pairs.end(), part.begin(), part.end());
    return pairs;
}

struct DisjointSet {
    std::vector<std::uint32_t> parent;
    std::vector<std::uint32_t> size;

    explicit DisjointSet(std::size_t n) : parent(n), size(n, 1) {
        for (std::size_t i = 0; i < n; ++i)
            parent[i] = static_cast<std::uint32_t>(i);
    }

    std::uint32_t find(std::uint32_t x) {
        std::uint32_t root = x;
        while (parent[root] != root)
            root = parent[root];
        while (parent[x] != root) {
            const std::uint32_t next = parent[x];
            parent[x] = root;
            x = next;
        }
        return root;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b)
            return;
        if (size[a] < size[b])
            std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
};

} // namespace detail

// Pairwise similarity as a real number (reporting only; edge decisions go
// through the exact rational comparison).
inline double similarity(const Community& c, UserId k, UserId j, SimilarityKind kind) {
    if (k == j)
        throw validation_error("similarity of a user with itself");
    auto intersection_size = [](const auto& a, const auto& b) {
        std::size_t n = 0;
        auto ia = a.begin();
        auto ib = b.begin();
        while (ia != a.end() && ib != b.end()) {
            if (*ia < *ib)
                ++ia;
            else if (*ib < *ia)
                ++ib;
            else
                ++n, ++ia, ++ib;
        }
        return n;
    };

    if (kind == SimilarityKind::user_tag) {
        const auto& a = c.tags_of(k);
        const auto& b = c.tags_of(j);
        const std::size_t inter = intersection_size(a, b);
        return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
    }
    const auto& a = c.items_of(k);
    const auto& b = c.items_of(j);
    const std::size_t inter = intersection_size(a, b);
    if (kind == SimilarityKind::directed_user_item)
        return static_cast<double>(inter) / static_cast<double>(a.size());
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

inline InterestGraph build_graph(const Community& c, SimilarityKind kind, Rational threshold,
                                 const GraphOptions& options = {}) {
    require_threshold_in_range(threshold);
    if (c.empty())
        throw empty_input_error("interest graph of an empty community");

    const auto projection = detail::project(c, kind, options.until);
    const auto pairs = detail::co_occurring_pairs(projection, options.threads);

    InterestGraph g;
    g.kind = kind;
    g.threshold = threshold;
    g.directed = is_directed(kind);
    g.adjacency.resize(c.num_users());
    if (g.directed)
        g.in_degree.assign(c.num_users(), 0);

    for (const detail::PairStat& pair : pairs) {
        const std::uint64_t size_lo = projection.user_sets[pair.lo].size();
        const std::uint64_t size_hi = projection.user_sets[pair.hi].size();
        if (!g.directed) {
            const std::uint64_t uni = size_lo + size_hi - pair.inter;
            if (ratio_exceeds(pair.inter, uni, threshold)) {
                const double sim = static_cast<double>(pair.inter) / static_cast<double>(uni);
                g.adjacency[pair.lo].push_back({pair.hi, sim});
                g.adjacency[pair.hi].push_back({pair.lo, sim});
            }
        } else {
            if (ratio_exceeds(pair.inter, size_lo, threshold)) {
                g.adjacency[pair.lo].push_back(
                    {pair.hi, static_cast<double>(pair.inter) / static_cast<double>(size_lo)});
                ++g.in_degree[pair.hi];
            }
            if (ratio_exceeds(pair.inter, size_hi, threshold)) {
                g.adjacency[pair.hi].push_back(
                    {pair.lo, static_cast<double>(pair.inter) / static_cast<double>(size_hi)});
                ++g.in_degree[pair.lo];
            }
        }
    }
    return g;
}

// Components on the undirected view (weak connectivity for directed
// graphs); isolated nodes are excluded from the count but reported.
inline ComponentSummary component_summary(const InterestGraph& g) {
    const std::size_t n = g.num_nodes();
    detail::DisjointSet ds(n);
    for (std::uint32_t u = 0; u < n; ++u)
        for (const Neighbor& nb : g.adjacency[u])
            ds.unite(u, nb.to);

    ComponentSummary s;
    std::vector<std::size_t> component_size(n, 0);
    for (std::uint32_t u = 0; u < n; ++u) {
        if (g.is_isolated(u)) {
            ++s.isolated_count;
        } else {
            ++s.nonisolated_node_count;
            ++component_size[ds.find(u)];
        }
    }
    for (std::size_t size : component_size) {
        if (size > 0) {
            ++s.components_excluding_isolated;
            s.largest_component_size = std::max(s.largest_component_size, size);
        }
    }
    return s;
}

// One summary per threshold. Pair statistics are computed once and
// re-thresholded; the result matches building each graph independently.
inline std::vector<std::pair<Rational, ComponentSummary>>
threshold_sweep(const Community& c, SimilarityKind kind, std::span<const Rational> thresholds,
                unsigned threads = 1) {
    for (const Rational& t : thresholds)
        require_threshold_in_range(t);
    if (c.empty())
        throw empty_input_error("interest graph of an empty community");
    if (thresholds.empty())
        return {};

    const auto projection = detail::project(c, kind, std::nullopt);
    const auto pairs = detail::co_occurring_pairs(projection, threads);
    const bool directed = is_directed(kind);
    const std::size_t n = c.num_users();

    std::vector<std::pair<Rational, ComponentSummary>> result;
    result.reserve(thresholds.size());
    for (const Rational& t : thresholds) {
        detail::DisjointSet ds(n);
        std::vector<std::uint8_t> connected(n, 0);
        for (const detail::PairStat& pair : pairs) {
            const std::uint64_t size_lo = projection.user_sets[pair.lo].size();
            const std::uint64_t size_hi = projection.user_sets[pair.hi].size();
            bool edge;
            if (directed)
                edge = ratio_exceeds(pair.inter, size_lo, t) ||
                       ratio_exceeds(pair.inter, size_hi, t);
            else
                edge = ratio_exceeds(pair.inter, size_lo + size_hi - pair.inter, t);
            if (edge) {
                ds.unite(pair.lo, pair.hi);
                connected[pair.lo] = connected[pair.hi] = 1;
            }
        }
        ComponentSummary s;
        std::vector<std::size_t> component_size(n, 0);
        for (std::uint32_t u = 0; u < n; ++u) {
            if (!connected[u]) {
                ++s.isolated_count;
            } else {
                ++s.nonisolated_node_count;
                ++component_size[ds.find(u)];
            }
        }
        for (std::size_t size : component_size) {
            if (size > 0) {
                ++s.components_excluding_isolated;
                s.largest_component_size = std::max(s.largest_component_size, size);
            }
        }
        result.emplace_back(t, s);
    }
    return result;
}

// Edge-list export: "src<TAB>dst<TAB>similarity", one edge per line,
// undirected edges listed once with the lower ordinal first.
inline void write_edge_list(std::ostream& os, const InterestGraph& g, const Community& c) {
    char buf[32];
    for (std::uint32_t u = 0; u < g.num_nodes(); ++u) {
        for (const Neighbor& nb : g.adjacency[u]) {
            if (!g.directed && nb.to < u)
                continue;
            std::snprintf(buf, sizeof(buf), "%.10g", nb.similarity);
            os << c.label(UserId{u}) << '\t' << c.label(UserId{nb.to}) << '\t' << buf << '\n';
        }
    }
}

} // namespace folkstat
