#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "egorec/dataset.hpp"
#include "egorec/similarity.hpp"

namespace egorec {

struct TrainTestSplit {
    UserId user = 0;
    std::vector<ItemId> train;  // ascending
    std::vector<ItemId> test;   // ascending
    double ratio = 0.7;
    std::uint64_t seed = 0;
};

// Uniform random partition of u's likes at the given train ratio;
// deterministic per (u, seed). The test side gets round((1-ratio)*n)
// items, clamped so both sides stay non-empty. Users with fewer than two
// likes cannot be split and yield nullopt.
std::optional<TrainTestSplit> split_likes(const Dataset& d, UserId u, double ratio,
                                          std::uint64_t seed);

struct RecEntry {
    ItemId item;
    double score;
};

struct RecommendationList {
    UserId user = 0;
    std::vector<RecEntry> entries;  // (score desc, item popularity desc, item id asc)
};

// Jaccard-weighted k-nn top-N recommendation: each item liked by a selected
// neighbor is scored by the sum of the similarities of the neighbors liking
// it. Train items are excluded; zero-score candidates stay in the list, so
// ties (and the all-zero case) fall back to global item popularity.
RecommendationList recommend(const Dataset& d, UserId u, std::span<const ItemId> train,
                             const NeighborPoolSpec& pool, std::size_t k,
                             std::size_t list_len);

// Position-discounted hit score of the list against the test set, in [0,1]:
//   (Rel_1 + sum_{i=2..N} Rel_i/log2(i)) / (1 + sum_{i=2..N} 1/log2(i))
// with N = min(max_rank, |test|) and Rel_i = 1 iff the i-th entry is a test
// item. Positions past the end of the list contribute 0. `test` is sorted.
double ndcg(const RecommendationList& rec, std::span<const ItemId> test,
            std::size_t max_rank = 10);

struct EvalOptions {
    NeighborPoolSpec pool;
    std::size_t k = 50;
    std::size_t list_len = 10;
    std::size_t n_splits = 10;
    double ratio = 0.7;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

struct EvalResult {
    PoolKind condition = PoolKind::friends;
    PoolKind random_base = PoolKind::full_network;
    std::size_t k = 0;
    std::size_t list_len = 0;
    std::size_t n_splits = 0;
    std::size_t n_users = 0;    // evaluated core users (>= 2 likes), per split
    std::size_t n_skipped = 0;  // core users excluded from every split
    std::vector<double> split_means;  // mean NDCG over users, one per split
    std::vector<double> split_stds;   // std over users within each split
    double mean_ndcg = 0.0;  // mean of split means
    double std_ndcg = 0.0;   // population std of split means
};

// Runs n_splits random train/test splits and reports NDCG aggregated as
// mean-over-users within each split, then mean/std over split means.
// Deterministic for a fixed seed regardless of worker count.
EvalResult evaluate(const Dataset& d, const EvalOptions& opts);

}  // namespace egorec
