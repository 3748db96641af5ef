#include "egorec/similarity.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "egorec/parallel.hpp"
#include "egorec/rng.hpp"
#include "topk_detail.hpp"

namespace egorec {

namespace {

std::size_t intersection_size(std::span<const ItemId> a, std::span<const ItemId> b) {
    std::size_t count = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

bool by_similarity_then_id(const ScoredNeighbor& a, const ScoredNeighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.user < b.user;
}

void require_core(const Dataset& d, UserId u, const char* where) {
    if (!d.graph.is_core(u))
        throw std::invalid_argument(std::string(where) + ": unknown or non-core user id " +
                                    std::to_string(u));
}

std::vector<ScoredNeighbor> score_and_sort(const Dataset& d,
                                           std::span<const ItemId> basis,
                                           const std::vector<UserId>& candidates) {
    std::vector<ScoredNeighbor> scored;
    scored.reserve(candidates.size());
    for (UserId v : candidates)
        scored.push_back({v, jaccard(basis, d.prefs.items_of_user[v])});
    std::sort(scored.begin(), scored.end(), by_similarity_then_id);
    return scored;
}

}  // namespace

double jaccard(std::span<const ItemId> a, std::span<const ItemId> b) {
    const std::size_t inter = intersection_size(a, b);
    const std::size_t uni = a.size() + b.size() - inter;
    if (uni == 0) return 0.0;  // both empty: defined as 0
    return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace detail {

namespace {

// Scores every pool member with a nonzero basis overlap via the item
// inverted index; zero-overlap members only matter when the positives
// cannot fill k, and are appended in ascending id order — the same order a
// full sort of the pool would give them.
std::vector<ScoredNeighbor> top_k_counted(const Dataset& d, UserId u, PoolKind kind,
                                          std::size_t k, std::span<const ItemId> basis,
                                          NeighborScratch& scratch) {
    scratch.ensure(d.n_users());
    scratch.exclude(u);
    if (kind == PoolKind::non_friends) {
        for (UserId f : d.graph.neighbors_of(u)) scratch.exclude(f);
    }

    for (ItemId item : basis) {
        for (UserId v : d.prefs.users_of_item[item]) {
            if (scratch.excluded[v]) continue;
            if (scratch.overlap[v]++ == 0) scratch.touched.push_back(v);
        }
    }

    std::vector<ScoredNeighbor> scored;
    scored.reserve(scratch.touched.size());
    for (UserId v : scratch.touched) {
        const std::size_t inter = scratch.overlap[v];
        const std::size_t uni = basis.size() + d.prefs.user_degree(v) - inter;
        scored.push_back({v, static_cast<double>(inter) / static_cast<double>(uni)});
    }
    std::sort(scored.begin(), scored.end(), by_similarity_then_id);
    if (scored.size() > k) scored.resize(k);

    if (scored.size() < k) {
        const auto& likers = d.users_with_likes;
        if (kind == PoolKind::full_network) {
            // Full-network pool also includes friends without likes; merge
            // the two ascending streams.
            const auto& friends = d.graph.neighbors_of(u);
            std::size_t i = 0, j = 0;
            while (scored.size() < k && (i < likers.size() || j < friends.size())) {
                UserId v;
                if (j >= friends.size() ||
                    (i < likers.size() && likers[i] <= friends[j])) {
                    if (j < friends.size() && friends[j] == likers[i]) ++j;
                    v = likers[i++];
                } else {
                    v = friends[j++];
                }
                if (v == u || scratch.overlap[v] > 0) continue;
                scored.push_back({v, 0.0});
            }
        } else {
            for (UserId v : likers) {
                if (scored.size() >= k) break;
                if (scratch.excluded[v] || scratch.overlap[v] > 0) continue;
                scored.push_back({v, 0.0});
            }
        }
    }
    scratch.reset();
    return scored;
}

}  // namespace

std::vector<UserId> materialize_pool(const Dataset& d, UserId u, PoolKind kind) {
    if (kind == PoolKind::friends) return d.graph.neighbors_of(u);

    const auto& friends = d.graph.neighbors_of(u);
    const auto& likers = d.users_with_likes;
    std::vector<UserId> pool;
    if (kind == PoolKind::non_friends) {
        pool.reserve(likers.size());
        for (UserId v : likers) {
            if (v == u || std::binary_search(friends.begin(), friends.end(), v)) continue;
            pool.push_back(v);
        }
        return pool;
    }
    // full network: likers ∪ friends, minus u, ascending
    pool.reserve(likers.size() + friends.size());
    std::size_t i = 0, j = 0;
    while (i < likers.size() || j < friends.size()) {
        UserId v;
        if (j >= friends.size() || (i < likers.size() && likers[i] <= friends[j])) {
            if (j < friends.size() && friends[j] == likers[i]) ++j;
            v = likers[i++];
        } else {
            v = friends[j++];
        }
        if (v != u) pool.push_back(v);
    }
    return pool;
}

std::vector<ScoredNeighbor> top_k_impl(const Dataset& d, UserId u,
                                       const NeighborPoolSpec& pool, std::size_t k,
                                       std::span<const ItemId> basis,
                                       NeighborScratch& scratch) {
    require_core(d, u, "top_k_neighbors");
    if (k == 0) return {};

    switch (pool.kind) {
        case PoolKind::friends: {
            auto scored = score_and_sort(d, basis, d.graph.neighbors_of(u));
            if (scored.size() > k) scored.resize(k);
            return scored;
        }
        case PoolKind::non_friends:
        case PoolKind::full_network:
            return top_k_counted(d, u, pool.kind, k, basis, scratch);
        case PoolKind::random_k: {
            if (pool.random_base == PoolKind::random_k)
                throw std::invalid_argument("top_k_neighbors: random_k cannot sample itself");
            const auto candidates = materialize_pool(d, u, pool.random_base);
            Rng rng(derive_seed(pool.seed, {seed_tag::random_pool, u}));
            return score_and_sort(d, basis, rng.sample(candidates, k));
        }
    }
    return {};
}

}  // namespace detail

std::vector<ScoredNeighbor> top_k_neighbors(const Dataset& d, UserId u,
                                            const NeighborPoolSpec& pool, std::size_t k,
                                            std::span<const ItemId> basis) {
    detail::NeighborScratch scratch;
    return detail::top_k_impl(d, u, pool, k, basis, scratch);
}

double avg_topk_similarity(const Dataset& d, std::size_t k, PoolKind pool_kind,
                           unsigned workers) {
    if (k == 0) throw std::invalid_argument("avg_topk_similarity: k must be >= 1");
    if (pool_kind != PoolKind::friends && pool_kind != PoolKind::non_friends)
        throw std::invalid_argument("avg_topk_similarity: pool must be friends or non_friends");
    if (d.graph.n_core() == 0)
        throw std::runtime_error("avg_topk_similarity: dataset has no core users");

    const std::size_t n = d.graph.n_core();
    std::vector<double> means(n, 0.0);
    std::vector<char> counted(n, 0);
    std::vector<detail::NeighborScratch> scratch(std::max(1u, workers));

    parallel_for(n, workers, [&](std::size_t ci, unsigned w) {
        const UserId u = d.graph.core_users[ci];
        NeighborPoolSpec spec;
        spec.kind = pool_kind;
        const auto top =
            detail::top_k_impl(d, u, spec, k, d.prefs.items_of_user[u], scratch[w]);
        if (top.empty()) return;  // empty pool: core skipped
        double sum = 0.0;
        for (const auto& s : top) sum += s.similarity;
        means[ci] = sum / static_cast<double>(top.size());
        counted[ci] = 1;
    });

    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t ci = 0; ci < n; ++ci) {
        if (counted[ci]) {
            sum += means[ci];
            ++used;
        }
    }
    if (used == 0)
        throw std::runtime_error("avg_topk_similarity: every core user has an empty pool");
    return sum / static_cast<double>(used);
}

std::pair<double, double> friend_vs_random_similarity(const Dataset& d,
                                                      std::size_t repeats,
                                                      std::uint64_t seed,
                                                      unsigned workers) {
    if (repeats == 0)
        throw std::invalid_argument("friend_vs_random_similarity: repeats must be >= 1");
    if (d.graph.n_core() == 0)
        throw std::runtime_error("friend_vs_random_similarity: dataset has no core users");

    const std::size_t n = d.graph.n_core();
    std::vector<double> friend_means(n, 0.0);
    std::vector<double> random_means(n, 0.0);

    parallel_for(n, workers, [&](std::size_t ci, unsigned) {
        const UserId u = d.graph.core_users[ci];
        const auto& basis = d.prefs.items_of_user[u];
        const auto& friends = d.graph.neighbors_of(u);

        double fsum = 0.0;
        for (UserId f : friends) fsum += jaccard(basis, d.prefs.items_of_user[f]);
        friend_means[ci] = fsum / static_cast<double>(friends.size());

        // Equal-sized random comparison set; when the pool is smaller than
        // the friend count, all non-friends are used.
        const auto pool = detail::materialize_pool(d, u, PoolKind::non_friends);
        if (pool.empty()) return;
        double rsum = 0.0;
        for (std::size_t r = 0; r < repeats; ++r) {
            Rng rng(derive_seed(seed, {seed_tag::friend_vs_random, u, r}));
            const auto sampled = rng.sample(pool, friends.size());
            double s = 0.0;
            for (UserId v : sampled) s += jaccard(basis, d.prefs.items_of_user[v]);
            rsum += s / static_cast<double>(sampled.size());
        }
        random_means[ci] = rsum / static_cast<double>(repeats);
    });

    double fsum = 0.0, rsum = 0.0;
    for (std::size_t ci = 0; ci < n; ++ci) {
        fsum += friend_means[ci];
        rsum += random_means[ci];
    }
    return {fsum / static_cast<double>(n), rsum / static_cast<double>(n)};
}

const char* pool_kind_label(PoolKind kind) {
    switch (kind) {
        case PoolKind::friends: return "friends";
        case PoolKind::non_friends: return "non-friends";
        case PoolKind::full_network: return "full";
        case PoolKind::random_k: return "random";
    }
    return "?";
}

}  // namespace egorec
