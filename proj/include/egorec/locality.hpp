#pragma once

#include <cstdint>
#include <vector>

#include "egorec/dataset.hpp"

namespace egorec {

// Mean over ego networks of the like density inside the ego's user-item
// matrix, as a percent. The item axis of an ego's matrix is the set of
// items liked by at least one member (not the global universe); egos whose
// members have no likes count as density 0.
double ego_sparsity(const Dataset& d);

// Like density of the whole user-item matrix, as a percent (items with at
// least one like).
double network_sparsity(const Dataset& d);

// For every item, the number of ego networks with at least one member who
// likes it.
std::vector<std::uint32_t> item_ego_counts(const Dataset& d);

// 100 minus the mean percentage of ego networks covered per liked item;
// higher means more local.
double uncovered_ego(const Dataset& d);

enum class ItemNullModel {
    uniform,            // per-user uniform resample; keeps user degrees only
    degree_preserving,  // bipartite double-edge swaps; keeps user and item degrees
};

// Returns a dataset with the same social graph and the likes redistributed
// under the chosen null model. Degree-preserving swaps attempt
// swap_factor * |likes| exchanges, rejecting any that would duplicate a
// (user, item) pair. Deterministic per seed.
Dataset randomize_items(const Dataset& d, ItemNullModel model, std::uint64_t seed,
                        std::size_t swap_factor = 10);

struct RewireSummary {
    std::size_t truncated_cores = 0;  // cores whose pool was smaller than their degree
};

// Returns a dataset with the same preference store and every core user's
// neighbor set replaced by an equal-sized uniform sample from all other
// users. Deterministic per seed.
Dataset randomize_friends(const Dataset& d, std::uint64_t seed,
                          RewireSummary* summary = nullptr);

enum class NullModel { item_uniform, item_degree_preserving, friend_rewire };

const char* null_model_label(NullModel m);

struct CoverageResult {
    double ratio = 0.0;                     // mean over replicates
    std::vector<double> replicate_ratios;   // item-averaged ratio per replicate
    std::size_t n_items_used = 0;           // liked items with real ego count >= 1
    std::size_t n_items_excluded = 0;       // liked items with real ego count 0
};

// Ego-coverage ratio against a null model: per item, (ego networks that
// contain the item in the randomized network) / (same in the real network),
// averaged over items and then over replicates. Higher means more locality.
// Items are weighted equally; weighting by popularity would emphasize the
// head of the catalog instead and is deliberately not done here.
CoverageResult coverage_ratio(const Dataset& d, NullModel null, std::size_t replicates,
                              std::uint64_t seed, unsigned workers = 1);

struct LocalityOptions {
    ItemNullModel item_model = ItemNullModel::degree_preserving;
    bool include_item_ratio = true;  // false: friend-rewire ratio only
    std::size_t replicates = 10;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

// Everything the locality analysis produces for one dataset.
struct LocalityReport {
    double friends_similarity = 0.0;
    double random_similarity = 0.0;
    double ego_sparsity = 0.0;      // percent
    double network_sparsity = 0.0;  // percent
    double uncovered_ego = 0.0;     // percent
    bool has_item_ratio = false;
    ItemNullModel item_model = ItemNullModel::degree_preserving;
    CoverageResult random_item_ego;
    CoverageResult random_friend_ego;
    std::size_t replicates = 0;
};

LocalityReport locality_report(const Dataset& d, const LocalityOptions& opts);

}  // namespace egorec
