#include <algorithm>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "egorec/dataset.hpp"
#include "egorec/locality.hpp"
#include "test_util.hpp"

using namespace egorec;
using testutil::TempDir;
using testutil::write_file;

namespace {

Dataset load_strings(const std::string& social, const std::string& likes) {
    TempDir dir("egorec-data");
    write_file(dir.file("social.tsv"), social);
    write_file(dir.file("likes.tsv"), likes);
    return load_dataset(dir.file("social.tsv"), dir.file("likes.tsv"));
}

UserId id_of(const Dataset& d, const std::string& name) {
    for (UserId u = 0; u < d.n_users(); ++u)
        if (d.user_names[u] == name) return u;
    REQUIRE(false);
    return 0;
}

}  // namespace

TEST_CASE("load: minimal well-formed input") {
    const auto d = load_strings("1\t2\n1\t3\n", "1\tA\n2\tA\n3\tB\n");
    CHECK(d.graph.n_core() == 1);
    CHECK(d.n_users() == 3);
    CHECK(d.prefs.like_count == 3);
    const UserId u1 = id_of(d, "1");
    REQUIRE(d.graph.is_core(u1));
    const auto& nbrs = d.graph.neighbors_of(u1);
    REQUIRE(nbrs.size() == 2);
    CHECK(d.user_names[nbrs[0]] == "2");
    CHECK(d.user_names[nbrs[1]] == "3");
}

TEST_CASE("load: empty likes file drops every core user") {
    CHECK_THROWS_WITH_AS(load_strings("1\t2\n", ""),
                         "core user has zero likes: all core users dropped",
                         std::runtime_error);
}

TEST_CASE("load: likes-only users join the non-friend pool") {
    const auto d = load_strings("1\t2\n", "1\tA\n2\tA\n99\tB\n");
    CHECK(d.n_users() == 3);
    const UserId u99 = id_of(d, "99");
    CHECK(!d.graph.is_core(u99));
    CHECK(std::binary_search(d.users_with_likes.begin(), d.users_with_likes.end(), u99));
}

TEST_CASE("load: duplicates are deduplicated with counts") {
    const auto d = load_strings("1\t2\n1\t2\n1\t3\n", "1\tA\n1\tA\n2\tB\n");
    CHECK(d.load_summary.duplicate_edges == 1);
    CHECK(d.load_summary.duplicate_likes == 1);
    CHECK(d.prefs.like_count == 2);
    CHECK(d.graph.neighbors_of(id_of(d, "1")).size() == 2);
}

TEST_CASE("load: self edges are dropped; all-self core errors out") {
    const auto d = load_strings("1\t1\n1\t2\n", "1\tA\n");
    CHECK(d.load_summary.self_edges == 1);
    CHECK(d.graph.neighbors_of(id_of(d, "1")).size() == 1);

    CHECK_THROWS_AS(load_strings("1\t1\n", "1\tA\n"), std::runtime_error);
    try {
        load_strings("1\t1\n", "1\tA\n");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("zero neighbors") != std::string::npos);
    }
}

TEST_CASE("load: parse errors carry the line number") {
    try {
        load_strings("1\t2\nbroken line without tab? no, spaces\n", "1\tA\n");
        REQUIRE(false);
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
}

TEST_CASE("load: comments and blank lines are ignored") {
    const auto d = load_strings("# social\n1\t2\n\n", "# likes\n1\tA\n\n2\tB\n");
    CHECK(d.graph.n_core() == 1);
    CHECK(d.prefs.like_count == 2);
}

TEST_CASE("load: core without likes is dropped but kept as plain user") {
    const auto d = load_strings("1\t2\n3\t2\n", "1\tA\n2\tA\n");
    CHECK(d.load_summary.dropped_core_users == 1);
    CHECK(d.graph.n_core() == 1);
    CHECK(d.n_users() == 3);  // user 3 still exists
}

TEST_CASE("stats: minimal dataset") {
    const auto d = load_strings("1\t2\n1\t3\n", "1\tA\n2\tA\n3\tB\n");
    const auto s = dataset_stats(d);
    CHECK(s.total_users == 3);
    CHECK(s.total_core_users == 1);
    CHECK(s.total_items == 2);
    CHECK(s.total_likes == 3);
    CHECK(s.likes_per_user.first == doctest::Approx(1.0));
    CHECK(s.likes_per_user.second == doctest::Approx(0.0));
    CHECK(s.friends_per_user.first == doctest::Approx(2.0));
}

TEST_CASE("stats: one item liked by two users") {
    const auto d = load_strings("1\t2\n", "1\tA\n2\tA\n");
    const auto s = dataset_stats(d);
    CHECK(s.total_items == 1);
    CHECK(s.likes_per_item.first == doctest::Approx(2.0));
    CHECK(s.likes_per_item.second == doctest::Approx(0.0));
}

TEST_CASE("stats: totals match an independent recount") {
    SynthParams p;
    p.n_core = 20;
    p.n_fringe = 100;
    p.n_items = 200;
    p.likes_per_user = 8;
    p.alpha = 0.5;
    p.seed = 11;
    const auto d = generate_synthetic(p);
    const auto s = dataset_stats(d);

    std::size_t by_user = 0, by_item = 0;
    for (UserId u = 0; u < d.n_users(); ++u) by_user += d.prefs.items_of_user[u].size();
    for (ItemId i = 0; i < d.n_items(); ++i) by_item += d.prefs.users_of_item[i].size();
    CHECK(by_user == s.total_likes);
    CHECK(by_item == s.total_likes);
    CHECK(s.likes_per_user.first * static_cast<double>(s.total_users) ==
          doctest::Approx(static_cast<double>(s.total_likes)));
    CHECK(s.likes_per_item.first * static_cast<double>(s.total_items) ==
          doctest::Approx(static_cast<double>(s.total_likes)));
}

TEST_CASE("transpose consistency holds in both directions") {
    SynthParams p;
    p.n_core = 10;
    p.n_fringe = 40;
    p.n_items = 60;
    p.likes_per_user = 5;
    p.alpha = 0.7;
    p.seed = 5;
    const auto d = generate_synthetic(p);
    for (UserId u = 0; u < d.n_users(); ++u) {
        for (ItemId i : d.prefs.items_of_user[u]) {
            const auto& us = d.prefs.users_of_item[i];
            CHECK(std::binary_search(us.begin(), us.end(), u));
        }
    }
    for (ItemId i = 0; i < d.n_items(); ++i) {
        for (UserId u : d.prefs.users_of_item[i]) {
            const auto& is = d.prefs.items_of_user[u];
            CHECK(std::binary_search(is.begin(), is.end(), i));
        }
    }
}

TEST_CASE("popularity_cdf: skewed and uniform cases") {
    // Items with like counts [8, 1, 1]: top 33.3% of items hold 0.8.
    const auto d = load_strings(
        "1\t2\n1\t3\n",
        "1\tP\n2\tP\n3\tP\n4\tP\n5\tP\n6\tP\n7\tP\n8\tP\n1\tQ\n2\tR\n");
    const auto cdf = popularity_cdf(d, {33.3, 66.6, 100.0});
    REQUIRE(cdf.size() == 3);
    CHECK(cdf[0].second == doctest::Approx(0.8));
    CHECK(cdf[1].second == doctest::Approx(0.9));
    CHECK(cdf[2].second == doctest::Approx(1.0));

    // Uniform popularity: identity line up to discretization.
    const auto u = load_strings("1\t2\n", "1\tA\n2\tB\n1\tC\n2\tD\n");
    const auto ucdf = popularity_cdf(u, {25, 50, 75, 100});
    CHECK(ucdf[0].second == doctest::Approx(0.25));
    CHECK(ucdf[1].second == doctest::Approx(0.50));
    CHECK(ucdf[2].second == doctest::Approx(0.75));
    CHECK(ucdf[3].second == doctest::Approx(1.00));

    CHECK(popularity_cdf(u, {}).empty());
    CHECK_THROWS_AS(popularity_cdf(u, {120.0}), std::invalid_argument);
}

TEST_CASE("popularity_cdf: monotone, ends at 1") {
    SynthParams p;
    p.n_core = 15;
    p.n_fringe = 60;
    p.n_items = 120;
    p.likes_per_user = 6;
    p.alpha = 0.8;
    p.seed = 77;
    const auto d = generate_synthetic(p);
    std::vector<double> grid;
    for (int k = 0; k <= 20; ++k) grid.push_back(5.0 * k);
    const auto cdf = popularity_cdf(d, grid);
    for (std::size_t i = 1; i < cdf.size(); ++i)
        CHECK(cdf[i].second >= cdf[i - 1].second);
    CHECK(cdf.back().second == doctest::Approx(1.0));
}

TEST_CASE("synthetic: deterministic per seed") {
    SynthParams p;
    p.n_core = 12;
    p.n_fringe = 50;
    p.n_items = 80;
    p.likes_per_user = 6;
    p.alpha = 0.4;
    p.seed = 9;
    const auto a = generate_synthetic(p);
    const auto b = generate_synthetic(p);
    CHECK(a.graph.neighbor_sets == b.graph.neighbor_sets);
    CHECK(a.prefs.items_of_user == b.prefs.items_of_user);
    p.seed = 10;
    const auto c = generate_synthetic(p);
    CHECK(a.prefs.items_of_user != c.prefs.items_of_user);
}

TEST_CASE("synthetic: alpha=1 keeps core likes inside the ego network") {
    SynthParams p;
    p.n_core = 5;
    p.n_fringe = 40;
    p.n_items = 3000;
    p.likes_per_user = 10;
    p.alpha = 1.0;
    p.seed = 21;
    p.min_friends = 5;
    p.max_friends = 10;
    const auto d = generate_synthetic(p);
    for (std::size_t ci = 0; ci < d.graph.n_core(); ++ci) {
        const UserId core = d.graph.core_users[ci];
        std::set<ItemId> friend_items;
        for (UserId f : d.graph.neighbor_sets[ci])
            for (ItemId i : d.prefs.items_of_user[f]) friend_items.insert(i);
        for (ItemId i : d.prefs.items_of_user[core])
            CHECK(friend_items.count(i) == 1);
    }
}

TEST_CASE("synthetic: infeasible parameters are rejected") {
    SynthParams p;
    p.n_core = 2;
    p.n_fringe = 2;
    p.n_items = 4;
    p.likes_per_user = 5;
    CHECK_THROWS_AS(generate_synthetic(p), std::invalid_argument);
    p.likes_per_user = 2;
    p.alpha = 1.5;
    CHECK_THROWS_AS(generate_synthetic(p), std::invalid_argument);
}

TEST_CASE("write + reload round-trips the dataset") {
    SynthParams p;
    p.n_core = 8;
    p.n_fringe = 30;
    p.n_items = 50;
    p.likes_per_user = 5;
    p.alpha = 0.6;
    p.seed = 3;
    const auto d = generate_synthetic(p);

    TempDir dir("egorec-roundtrip");
    write_dataset(d, dir.file("social.tsv"), dir.file("likes.tsv"));
    const auto r = load_dataset(dir.file("social.tsv"), dir.file("likes.tsv"));

    CHECK(r.n_users() == d.n_users());
    CHECK(r.n_items() == d.n_items());
    CHECK(r.prefs.like_count == d.prefs.like_count);
    CHECK(r.graph.n_core() == d.graph.n_core());
    // Per-name degrees survive the id remapping.
    for (UserId u = 0; u < d.n_users(); ++u) {
        bool found = false;
        for (UserId v = 0; v < r.n_users(); ++v) {
            if (r.user_names[v] == d.user_names[u]) {
                CHECK(r.prefs.user_degree(v) == d.prefs.user_degree(u));
                found = true;
                break;
            }
        }
        CHECK(found);
    }
}
