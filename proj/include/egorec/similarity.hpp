#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "egorec/dataset.hpp"

namespace egorec {

// Candidate pools for neighbor selection, relative to one core user u:
//   friends      — neighbors(u), complete first-degree connections
//   non_friends  — every user with likes outside u's ego network
//   full_network — friends ∪ non_friends
//   random_k     — k users sampled uniformly from `random_base`, then scored
enum class PoolKind { friends, non_friends, full_network, random_k };

struct NeighborPoolSpec {
    PoolKind kind = PoolKind::friends;
    PoolKind random_base = PoolKind::full_network;  // only used by random_k
    std::uint64_t seed = 0;                         // only used by random_k
};

struct ScoredNeighbor {
    UserId user;
    double similarity;  // in [0, 1]
};

// |a ∩ b| / |a ∪ b| over sorted itemsets; 0 when both are empty.
double jaccard(std::span<const ItemId> a, std::span<const ItemId> b);

// The k pool members most similar to `basis`, sorted by (similarity desc,
// user id asc); same tie order as a full sort of the pool. Fewer than k are
// returned when the pool is smaller. Throws if u is not a core user.
std::vector<ScoredNeighbor> top_k_neighbors(const Dataset& d, UserId u,
                                            const NeighborPoolSpec& pool, std::size_t k,
                                            std::span<const ItemId> basis);

// Mean over core users of the mean similarity to their top-k pool members,
// computed on full itemsets. Cores whose pool is smaller than k average over
// what is available; cores with an empty pool are skipped.
double avg_topk_similarity(const Dataset& d, std::size_t k, PoolKind pool_kind,
                           unsigned workers = 1);

// (friends_avg, random_avg): mean Jaccard similarity between a core user and
// all of her friends, versus the same number of randomly drawn non-friends,
// averaged over `repeats` resamples and then over core users.
std::pair<double, double> friend_vs_random_similarity(const Dataset& d,
                                                      std::size_t repeats,
                                                      std::uint64_t seed,
                                                      unsigned workers = 1);

const char* pool_kind_label(PoolKind kind);

}  // namespace egorec
