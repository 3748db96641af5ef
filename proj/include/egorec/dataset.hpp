#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace egorec {

// Dense internal ids, assigned in first-appearance order at load time.
// Original string ids are kept in Dataset::user_names / item_names.
using UserId = std::uint32_t;
using ItemId = std::uint32_t;

inline constexpr std::int32_t kNotCore = -1;

// Core users and their complete first-degree neighbor sets. Edges are
// stored core -> neighbor; Facebook friends and Twitter followees are
// represented identically.
struct SocialGraph {
    std::vector<UserId> core_users;                  // ascending
    std::vector<std::vector<UserId>> neighbor_sets;  // parallel to core_users, each ascending
    std::vector<std::int32_t> core_index;            // per user id; kNotCore if not core

    bool is_core(UserId u) const {
        return u < core_index.size() && core_index[u] != kNotCore;
    }
    const std::vector<UserId>& neighbors_of(UserId u) const {
        return neighbor_sets[static_cast<std::size_t>(core_index[u])];
    }
    std::size_t n_core() const { return core_users.size(); }
};

// Bipartite unary likes, indexed both ways. The two indexes are exact
// transposes; there are no duplicate (user, item) pairs.
struct PreferenceStore {
    std::vector<std::vector<ItemId>> items_of_user;  // each ascending
    std::vector<std::vector<UserId>> users_of_item;  // each ascending
    std::size_t like_count = 0;

    std::size_t n_users() const { return items_of_user.size(); }
    std::size_t n_items() const { return users_of_item.size(); }
    std::size_t user_degree(UserId u) const { return items_of_user[u].size(); }
    std::size_t item_degree(ItemId i) const { return users_of_item[i].size(); }
};

// Counters reported by load_dataset; all zero for generated datasets.
struct LoadSummary {
    std::size_t duplicate_edges = 0;
    std::size_t self_edges = 0;
    std::size_t duplicate_likes = 0;
    std::size_t dropped_core_users = 0;  // core users with zero likes
};

struct Dataset {
    SocialGraph graph;
    PreferenceStore prefs;
    std::vector<std::string> user_names;
    std::vector<std::string> item_names;
    std::vector<UserId> users_with_likes;  // ascending; the candidate pool universe
    LoadSummary load_summary;

    std::size_t n_users() const { return prefs.n_users(); }
    std::size_t n_items() const { return prefs.n_items(); }
};

// Table-style overview statistics.
struct DatasetStats {
    std::size_t total_users = 0;
    std::size_t total_core_users = 0;
    std::size_t total_items = 0;  // items with at least one like
    std::size_t total_likes = 0;
    std::pair<double, double> friends_per_user;  // (mean, stddev) over core users
    std::pair<double, double> likes_per_user;    // over all users
    std::pair<double, double> likes_per_item;    // over items with >= 1 like
};

// Loads the tab-separated social and likes files (see README for the
// format). Core users are exactly the users in column 1 of the social
// file; users appearing only in the likes file are retained as
// non-friends. Core users without likes are dropped from the core set
// (counted in LoadSummary) but kept as plain users.
// Throws std::runtime_error with a line diagnostic on malformed input,
// on a core user left with zero neighbors, and when every core user
// would be dropped.
Dataset load_dataset(const std::string& social_path, const std::string& likes_path);

// Writes a dataset back out in the same two-file format load_dataset reads.
void write_dataset(const Dataset& d, const std::string& social_path,
                   const std::string& likes_path);

DatasetStats dataset_stats(const Dataset& d);

// Cumulative share of all likes held by the top p% most-liked items, for
// each percentile p in grid. Monotone non-decreasing; reaches 1.0 at 100.
std::vector<std::pair<double, double>> popularity_cdf(const Dataset& d,
                                                      const std::vector<double>& grid);

struct SynthParams {
    std::size_t n_core = 0;
    std::size_t n_fringe = 0;
    std::size_t n_items = 0;         // item universe sampled from
    std::size_t likes_per_user = 0;  // exact per-user like count
    double alpha = 0.0;              // probability of copying a friend's like
    std::uint64_t seed = 1;
    // Friend-set sizes are drawn uniformly from [min_friends, max_friends],
    // clamped to the fringe size.
    std::size_t min_friends = 10;
    std::size_t max_friends = 50;
};

// Generates a dataset with planted preference locality. Fringe users like
// uniformly random items; each core user befriends a random fringe subset
// and builds its likes sequentially, copying a uniformly random existing
// like of a uniformly random friend with probability alpha and liking a
// uniformly random item otherwise (duplicates are re-drawn).
// Deterministic for a fixed SynthParams.
Dataset generate_synthetic(const SynthParams& params);

}  // namespace egorec
