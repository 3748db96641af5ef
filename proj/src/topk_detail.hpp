#pragma once

// Internals shared by the similarity and recommender translation units.

#include <cstdint>
#include <span>
#include <vector>

#include "egorec/dataset.hpp"
#include "egorec/similarity.hpp"

namespace egorec::detail {

// Reusable per-worker buffers for overlap counting across a whole network.
struct NeighborScratch {
    std::vector<std::uint32_t> overlap;  // per user id, cleared via `touched`
    std::vector<UserId> touched;
    std::vector<char> excluded;  // per user id, cleared via `excluded_touched`
    std::vector<UserId> excluded_touched;

    void ensure(std::size_t n_users) {
        if (overlap.size() < n_users) overlap.resize(n_users, 0);
        if (excluded.size() < n_users) excluded.resize(n_users, 0);
    }
    void exclude(UserId u) {
        if (!excluded[u]) {
            excluded[u] = 1;
            excluded_touched.push_back(u);
        }
    }
    void reset() {
        for (UserId u : touched) overlap[u] = 0;
        touched.clear();
        for (UserId u : excluded_touched) excluded[u] = 0;
        excluded_touched.clear();
    }
};

std::vector<ScoredNeighbor> top_k_impl(const Dataset& d, UserId u,
                                       const NeighborPoolSpec& pool, std::size_t k,
                                       std::span<const ItemId> basis,
                                       NeighborScratch& scratch);

// The candidate pool as an ascending id list (friends / non_friends / full).
std::vector<UserId> materialize_pool(const Dataset& d, UserId u, PoolKind kind);

}  // namespace egorec::detail
