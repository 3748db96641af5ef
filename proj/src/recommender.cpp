#include "egorec/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "egorec/parallel.hpp"
#include "egorec/rng.hpp"
#include "topk_detail.hpp"

namespace egorec {

namespace {

// Stamped accumulators sized to the item universe, reused across calls.
struct RecScratch {
    std::vector<double> score;
    std::vector<std::uint32_t> stamp;
    std::vector<std::uint32_t> blocked;  // train items of the current call
    std::uint32_t epoch = 0;
    detail::NeighborScratch neighbors;

    void ensure(std::size_t n_items) {
        if (score.size() < n_items) {
            score.resize(n_items, 0.0);
            stamp.resize(n_items, 0);
            blocked.resize(n_items, 0);
        }
    }
};

RecommendationList recommend_impl(const Dataset& d, UserId u,
                                  std::span<const ItemId> train,
                                  const NeighborPoolSpec& pool, std::size_t k,
                                  std::size_t list_len, RecScratch& scratch) {
    const auto neighbors = detail::top_k_impl(d, u, pool, k, train, scratch.neighbors);

    scratch.ensure(d.n_items());
    const std::uint32_t epoch = ++scratch.epoch;
    for (ItemId i : train) scratch.blocked[i] = epoch;

    // Accumulate in neighbor order (similarity desc, id asc) so that the
    // floating-point sums are reproducible.
    std::vector<ItemId> candidates;
    for (const auto& nbr : neighbors) {
        for (ItemId i : d.prefs.items_of_user[nbr.user]) {
            if (scratch.blocked[i] == epoch) continue;
            if (scratch.stamp[i] != epoch) {
                scratch.stamp[i] = epoch;
                scratch.score[i] = 0.0;
                candidates.push_back(i);
            }
            scratch.score[i] += nbr.similarity;
        }
    }

    std::sort(candidates.begin(), candidates.end(), [&](ItemId a, ItemId b) {
        if (scratch.score[a] != scratch.score[b]) return scratch.score[a] > scratch.score[b];
        const std::size_t pa = d.prefs.item_degree(a);
        const std::size_t pb = d.prefs.item_degree(b);
        if (pa != pb) return pa > pb;
        return a < b;
    });
    if (candidates.size() > list_len) candidates.resize(list_len);

    RecommendationList rec;
    rec.user = u;
    rec.entries.reserve(candidates.size());
    for (ItemId i : candidates) rec.entries.push_back({i, scratch.score[i]});
    return rec;
}

double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double population_std(const std::vector<double>& xs, double mean) {
    double sq = 0.0;
    for (double x : xs) sq += (x - mean) * (x - mean);
    return std::sqrt(sq / static_cast<double>(xs.size()));
}

}  // namespace

std::optional<TrainTestSplit> split_likes(const Dataset& d, UserId u, double ratio,
                                          std::uint64_t seed) {
    if (u >= d.n_users())
        throw std::invalid_argument("split_likes: unknown user id " + std::to_string(u));
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("split_likes: ratio must be in (0,1)");
    const auto& likes = d.prefs.items_of_user[u];
    if (likes.size() < 2) return std::nullopt;

    const auto n = likes.size();
    auto test_size = static_cast<std::size_t>(
        std::llround((1.0 - ratio) * static_cast<double>(n)));
    test_size = std::min(std::max<std::size_t>(test_size, 1), n - 1);

    std::vector<ItemId> shuffled(likes);
    Rng rng(derive_seed(seed, {seed_tag::split, u}));
    rng.shuffle(shuffled);

    TrainTestSplit split;
    split.user = u;
    split.ratio = ratio;
    split.seed = seed;
    split.train.assign(shuffled.begin(), shuffled.end() - static_cast<std::ptrdiff_t>(test_size));
    split.test.assign(shuffled.end() - static_cast<std::ptrdiff_t>(test_size), shuffled.end());
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

RecommendationList recommend(const Dataset& d, UserId u, std::span<const ItemId> train,
                             const NeighborPoolSpec& pool, std::size_t k,
                             std::size_t list_len) {
    RecScratch scratch;
    return recommend_impl(d, u, train, pool, k, list_len, scratch);
}

double ndcg(const RecommendationList& rec, std::span<const ItemId> test,
            std::size_t max_rank) {
    if (test.empty()) throw std::invalid_argument("ndcg: empty test set");
    const std::size_t n = std::min(max_rank, test.size());
    double num = 0.0, den = 0.0;
    for (std::size_t pos = 1; pos <= n; ++pos) {
        const double w = pos == 1 ? 1.0 : 1.0 / std::log2(static_cast<double>(pos));
        den += w;
        if (pos - 1 < rec.entries.size() &&
            std::binary_search(test.begin(), test.end(), rec.entries[pos - 1].item)) {
            num += w;
        }
    }
    return num / den;
}

EvalResult evaluate(const Dataset& d, const EvalOptions& opts) {
    if (!(opts.ratio > 0.0 && opts.ratio < 1.0))
        throw std::invalid_argument("evaluate: ratio must be in (0,1)");
    if (opts.n_splits == 0) throw std::invalid_argument("evaluate: n_splits must be >= 1");
    if (opts.list_len == 0) throw std::invalid_argument("evaluate: list_len must be >= 1");

    std::vector<UserId> users;
    users.reserve(d.graph.n_core());
    for (UserId u : d.graph.core_users) {
        if (d.prefs.user_degree(u) >= 2) users.push_back(u);
    }
    if (users.empty()) throw std::runtime_error("evaluate: no core user has >= 2 likes");

    EvalResult result;
    result.condition = opts.pool.kind;
    result.random_base = opts.pool.random_base;
    result.k = opts.k;
    result.list_len = opts.list_len;
    result.n_splits = opts.n_splits;
    result.n_users = users.size();
    result.n_skipped = d.graph.n_core() - users.size();

    const std::size_t n_tasks = opts.n_splits * users.size();
    std::vector<double> values(n_tasks, 0.0);
    std::vector<RecScratch> scratch(std::max(1u, opts.workers));

    parallel_for(n_tasks, opts.workers, [&](std::size_t task, unsigned w) {
        const std::size_t s = task / users.size();
        const UserId u = users[task % users.size()];
        const std::uint64_t split_seed = derive_seed(opts.seed, {seed_tag::eval_split, s});
        const auto split = split_likes(d, u, opts.ratio, split_seed);

        NeighborPoolSpec pool = opts.pool;
        if (pool.kind == PoolKind::random_k)
            pool.seed = derive_seed(opts.seed, {seed_tag::random_pool, s, pool.seed});

        const auto rec =
            recommend_impl(d, u, split->train, pool, opts.k, opts.list_len, scratch[w]);
        values[task] = ndcg(rec, split->test, opts.list_len);
    });

    result.split_means.resize(opts.n_splits);
    result.split_stds.resize(opts.n_splits);
    for (std::size_t s = 0; s < opts.n_splits; ++s) {
        std::vector<double> per_user(values.begin() + static_cast<std::ptrdiff_t>(s * users.size()),
                                     values.begin() + static_cast<std::ptrdiff_t>((s + 1) * users.size()));
        result.split_means[s] = mean_of(per_user);
        result.split_stds[s] = population_std(per_user, result.split_means[s]);
    }
    result.mean_ndcg = mean_of(result.split_means);
    result.std_ndcg = population_std(result.split_means, result.mean_ndcg);
    return result;
}

}  // namespace egorec
