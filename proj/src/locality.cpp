#include "egorec/locality.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "egorec/parallel.hpp"
#include "egorec/rng.hpp"
#include "egorec/similarity.hpp"

namespace egorec {

namespace {

// Rebuilds the two-way preference index from an edge list, keeping the
// graph and id maps of `base` untouched.
Dataset with_new_likes(const Dataset& base, std::vector<std::pair<UserId, ItemId>> likes) {
    Dataset out;
    out.graph = base.graph;
    out.user_names = base.user_names;
    out.item_names = base.item_names;
    out.load_summary = {};

    std::sort(likes.begin(), likes.end());
    out.prefs.items_of_user.assign(base.n_users(), {});
    out.prefs.users_of_item.assign(base.n_items(), {});
    for (const auto& [u, i] : likes) {
        out.prefs.items_of_user[u].push_back(i);
        out.prefs.users_of_item[i].push_back(u);
    }
    out.prefs.like_count = likes.size();
    for (UserId u = 0; u < out.n_users(); ++u) {
        if (!out.prefs.items_of_user[u].empty()) out.users_with_likes.push_back(u);
    }
    return out;
}

std::size_t liked_item_count(const Dataset& d) {
    std::size_t n = 0;
    for (ItemId i = 0; i < d.n_items(); ++i)
        if (d.prefs.item_degree(i) > 0) ++n;
    return n;
}

void require_egos(const Dataset& d, const char* where) {
    if (d.graph.n_core() == 0)
        throw std::runtime_error(std::string(where) + ": dataset has no ego networks");
}

}  // namespace

double ego_sparsity(const Dataset& d) {
    require_egos(d, "ego_sparsity");
    std::vector<std::uint32_t> stamp(d.n_items(), std::numeric_limits<std::uint32_t>::max());

    double total = 0.0;
    for (std::size_t ci = 0; ci < d.graph.n_core(); ++ci) {
        const UserId core = d.graph.core_users[ci];
        std::size_t members = 0;
        std::size_t likes = 0;
        std::size_t distinct = 0;
        auto visit = [&](UserId m) {
            ++members;
            likes += d.prefs.user_degree(m);
            for (ItemId i : d.prefs.items_of_user[m]) {
                if (stamp[i] != ci) {
                    stamp[i] = static_cast<std::uint32_t>(ci);
                    ++distinct;
                }
            }
        };
        visit(core);
        for (UserId nbr : d.graph.neighbor_sets[ci]) visit(nbr);
        if (distinct > 0) {
            total += 100.0 * static_cast<double>(likes) /
                     (static_cast<double>(members) * static_cast<double>(distinct));
        }
    }
    return total / static_cast<double>(d.graph.n_core());
}

double network_sparsity(const Dataset& d) {
    if (d.prefs.like_count == 0)
        throw std::runtime_error("network_sparsity: dataset has no likes");
    const std::size_t items = liked_item_count(d);
    return 100.0 * static_cast<double>(d.prefs.like_count) /
           (static_cast<double>(d.n_users()) * static_cast<double>(items));
}

std::vector<std::uint32_t> item_ego_counts(const Dataset& d) {
    std::vector<std::uint32_t> counts(d.n_items(), 0);
    std::vector<std::uint32_t> stamp(d.n_items(), std::numeric_limits<std::uint32_t>::max());
    for (std::size_t ci = 0; ci < d.graph.n_core(); ++ci) {
        auto visit = [&](UserId m) {
            for (ItemId i : d.prefs.items_of_user[m]) {
                if (stamp[i] != ci) {
                    stamp[i] = static_cast<std::uint32_t>(ci);
                    ++counts[i];
                }
            }
        };
        visit(d.graph.core_users[ci]);
        for (UserId nbr : d.graph.neighbor_sets[ci]) visit(nbr);
    }
    return counts;
}

double uncovered_ego(const Dataset& d) {
    require_egos(d, "uncovered_ego");
    const auto counts = item_ego_counts(d);
    const double n_egos = static_cast<double>(d.graph.n_core());
    double covered_sum = 0.0;
    std::size_t n_liked = 0;
    for (ItemId i = 0; i < d.n_items(); ++i) {
        if (d.prefs.item_degree(i) == 0) continue;
        ++n_liked;
        covered_sum += 100.0 * static_cast<double>(counts[i]) / n_egos;
    }
    if (n_liked == 0) throw std::runtime_error("uncovered_ego: dataset has no liked items");
    return 100.0 - covered_sum / static_cast<double>(n_liked);
}

Dataset randomize_items(const Dataset& d, ItemNullModel model, std::uint64_t seed,
                        std::size_t swap_factor) {
    const std::size_t n_items = d.n_items();
    std::vector<std::pair<UserId, ItemId>> edges;
    edges.reserve(d.prefs.like_count);

    if (model == ItemNullModel::uniform) {
        std::vector<std::uint32_t> stamp(n_items, std::numeric_limits<std::uint32_t>::max());
        std::vector<ItemId> universe;
        for (UserId u = 0; u < d.n_users(); ++u) {
            const std::size_t degree = d.prefs.user_degree(u);
            if (degree == 0) continue;
            if (degree > n_items)
                throw std::runtime_error(
                    "randomize_items: user degree exceeds the item universe");
            Rng rng(derive_seed(seed, {seed_tag::item_null, 0, u}));
            if (degree * 4 >= n_items) {
                // Dense case: partial Fisher-Yates over the whole universe.
                universe.resize(n_items);
                for (ItemId i = 0; i < n_items; ++i) universe[i] = i;
                const auto picked = rng.sample(universe, degree);
                for (ItemId i : picked) edges.emplace_back(u, i);
            } else {
                std::size_t placed = 0;
                while (placed < degree) {
                    const auto i = static_cast<ItemId>(rng.below(n_items));
                    if (stamp[i] == u) continue;
                    stamp[i] = u;
                    edges.emplace_back(u, i);
                    ++placed;
                }
            }
        }
        return with_new_likes(d, std::move(edges));
    }

    // Degree-preserving double-edge swaps on the bipartite like graph.
    for (UserId u = 0; u < d.n_users(); ++u)
        for (ItemId i : d.prefs.items_of_user[u]) edges.emplace_back(u, i);

    auto key = [n_items](UserId u, ItemId i) {
        return static_cast<std::uint64_t>(u) * n_items + i;
    };
    std::unordered_set<std::uint64_t> present;
    present.reserve(edges.size() * 2);
    for (const auto& [u, i] : edges) present.insert(key(u, i));

    Rng rng(derive_seed(seed, {seed_tag::item_null, 1}));
    const std::size_t n_edges = edges.size();
    const std::size_t attempts = swap_factor * n_edges;
    for (std::size_t t = 0; t < attempts; ++t) {
        const std::size_t a = static_cast<std::size_t>(rng.below(n_edges));
        const std::size_t b = static_cast<std::size_t>(rng.below(n_edges));
        if (a == b) continue;
        const auto [u1, i1] = edges[a];
        const auto [u2, i2] = edges[b];
        if (u1 == u2 || i1 == i2) continue;
        if (present.count(key(u1, i2)) || present.count(key(u2, i1))) continue;
        present.erase(key(u1, i1));
        present.erase(key(u2, i2));
        present.insert(key(u1, i2));
        present.insert(key(u2, i1));
        edges[a].second = i2;
        edges[b].second = i1;
    }
    return with_new_likes(d, std::move(edges));
}

Dataset randomize_friends(const Dataset& d, std::uint64_t seed, RewireSummary* summary) {
    Dataset out = d;
    RewireSummary local;

    std::vector<UserId> pool;
    pool.reserve(d.n_users() - 1);
    for (std::size_t ci = 0; ci < d.graph.n_core(); ++ci) {
        const UserId core = d.graph.core_users[ci];
        const std::size_t want = d.graph.neighbor_sets[ci].size();
        pool.clear();
        for (UserId v = 0; v < d.n_users(); ++v) {
            if (v != core) pool.push_back(v);
        }
        if (want > pool.size()) ++local.truncated_cores;
        Rng rng(derive_seed(seed, {seed_tag::friend_null, core}));
        auto sampled = rng.sample(pool, want);
        std::sort(sampled.begin(), sampled.end());
        out.graph.neighbor_sets[ci] = std::move(sampled);
    }
    if (summary) *summary = local;
    return out;
}

const char* null_model_label(NullModel m) {
    switch (m) {
        case NullModel::item_uniform: return "uniform";
        case NullModel::item_degree_preserving: return "degree-preserving";
        case NullModel::friend_rewire: return "friend-rewire";
    }
    return "?";
}

CoverageResult coverage_ratio(const Dataset& d, NullModel null, std::size_t replicates,
                              std::uint64_t seed, unsigned workers) {
    if (replicates == 0)
        throw std::invalid_argument("coverage_ratio: replicates must be >= 1");
    require_egos(d, "coverage_ratio");

    const auto real_counts = item_ego_counts(d);
    CoverageResult result;
    for (ItemId i = 0; i < d.n_items(); ++i) {
        if (d.prefs.item_degree(i) == 0) continue;
        if (real_counts[i] > 0) {
            ++result.n_items_used;
        } else {
            ++result.n_items_excluded;
        }
    }
    if (result.n_items_used == 0)
        throw std::runtime_error("coverage_ratio: no item appears in any ego network");

    result.replicate_ratios.assign(replicates, 0.0);
    parallel_for(replicates, workers, [&](std::size_t r, unsigned) {
        const std::uint64_t rep_seed = derive_seed(seed, {seed_tag::replicate, r});
        Dataset randomized;
        switch (null) {
            case NullModel::item_uniform:
                randomized = randomize_items(d, ItemNullModel::uniform, rep_seed);
                break;
            case NullModel::item_degree_preserving:
                randomized = randomize_items(d, ItemNullModel::degree_preserving, rep_seed);
                break;
            case NullModel::friend_rewire:
                randomized = randomize_friends(d, rep_seed);
                break;
        }
        const auto rand_counts = item_ego_counts(randomized);
        double sum = 0.0;
        for (ItemId i = 0; i < d.n_items(); ++i) {
            if (d.prefs.item_degree(i) == 0 || real_counts[i] == 0) continue;
            sum += static_cast<double>(rand_counts[i]) / static_cast<double>(real_counts[i]);
        }
        result.replicate_ratios[r] = sum / static_cast<double>(result.n_items_used);
    });

    double total = 0.0;
    for (double r : result.replicate_ratios) total += r;
    result.ratio = total / static_cast<double>(replicates);
    return result;
}

LocalityReport locality_report(const Dataset& d, const LocalityOptions& opts) {
    LocalityReport report;
    report.replicates = opts.replicates;
    report.item_model = opts.item_model;
    report.has_item_ratio = opts.include_item_ratio;

    const auto sim = friend_vs_random_similarity(d, opts.replicates, opts.seed, opts.workers);
    report.friends_similarity = sim.first;
    report.random_similarity = sim.second;
    report.ego_sparsity = ego_sparsity(d);
    report.network_sparsity = network_sparsity(d);
    report.uncovered_ego = uncovered_ego(d);

    if (opts.include_item_ratio) {
        const auto null = opts.item_model == ItemNullModel::uniform
                              ? NullModel::item_uniform
                              : NullModel::item_degree_preserving;
        report.random_item_ego =
            coverage_ratio(d, null, opts.replicates,
                           derive_seed(opts.seed, {seed_tag::coverage_item}), opts.workers);
    }
    report.random_friend_ego =
        coverage_ratio(d, NullModel::friend_rewire, opts.replicates,
                       derive_seed(opts.seed, {seed_tag::coverage_friend}), opts.workers);
    return report;
}

}  // namespace egorec
