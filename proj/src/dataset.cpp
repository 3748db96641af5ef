#include "egorec/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "egorec/rng.hpp"

namespace egorec {

namespace {

struct Interner {
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<std::string> names;

    std::uint32_t get(const std::string& name) {
        auto it = index.find(name);
        if (it != index.end()) return it->second;
        const auto id = static_cast<std::uint32_t>(names.size());
        index.emplace(name, id);
        names.push_back(name);
        return id;
    }
};

bool has_whitespace(const std::string& s) {
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f')
            return true;
    }
    return false;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

// Reads one id<TAB>id pair per line; '#' lines and blank lines are skipped.
void for_each_pair(const std::string& path,
                   const std::function<void(const std::string&, const std::string&,
                                            std::size_t)>& fn) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            parse_fail(path, line_no, "expected two tab-separated fields");
        const std::string a = line.substr(0, tab);
        const std::string b = line.substr(tab + 1);
        if (a.empty() || b.empty())
            parse_fail(path, line_no, "empty field");
        if (has_whitespace(a) || has_whitespace(b))
            parse_fail(path, line_no, "ids must not contain whitespace");
        fn(a, b, line_no);
    }
}

std::pair<double, double> mean_stddev(const std::vector<std::size_t>& xs) {
    if (xs.empty()) return {0.0, 0.0};
    double sum = 0.0;
    for (auto x : xs) sum += static_cast<double>(x);
    const double mean = sum / static_cast<double>(xs.size());
    double sq = 0.0;
    for (auto x : xs) {
        const double d = static_cast<double>(x) - mean;
        sq += d * d;
    }
    return {mean, std::sqrt(sq / static_cast<double>(xs.size()))};
}

void finalize(Dataset& d, std::vector<std::pair<UserId, ItemId>>& likes,
              std::vector<std::pair<UserId, std::vector<UserId>>>& cores) {
    const std::size_t n_users = d.user_names.size();

    std::sort(likes.begin(), likes.end());
    const auto dup_begin = std::unique(likes.begin(), likes.end());
    d.load_summary.duplicate_likes += static_cast<std::size_t>(likes.end() - dup_begin);
    likes.erase(dup_begin, likes.end());

    std::size_t n_items = 0;
    for (const auto& [u, i] : likes) n_items = std::max<std::size_t>(n_items, i + 1);

    d.prefs.items_of_user.assign(n_users, {});
    d.prefs.users_of_item.assign(n_items, {});
    for (const auto& [u, i] : likes) {
        d.prefs.items_of_user[u].push_back(i);
        d.prefs.users_of_item[i].push_back(u);
    }
    d.prefs.like_count = likes.size();

    // Drop core users without likes; they stay in the dataset as plain users.
    std::sort(cores.begin(), cores.end());
    std::vector<std::pair<UserId, std::vector<UserId>>> kept;
    kept.reserve(cores.size());
    for (auto& [core, nbrs] : cores) {
        if (d.prefs.items_of_user[core].empty()) {
            ++d.load_summary.dropped_core_users;
        } else {
            kept.emplace_back(core, std::move(nbrs));
        }
    }
    if (kept.empty())
        throw std::runtime_error("core user has zero likes: all core users dropped");

    d.graph.core_users.clear();
    d.graph.neighbor_sets.clear();
    d.graph.core_index.assign(n_users, kNotCore);
    for (auto& [core, nbrs] : kept) {
        d.graph.core_index[core] = static_cast<std::int32_t>(d.graph.core_users.size());
        d.graph.core_users.push_back(core);
        d.graph.neighbor_sets.push_back(std::move(nbrs));
    }

    d.users_with_likes.clear();
    for (UserId u = 0; u < n_users; ++u) {
        if (!d.prefs.items_of_user[u].empty()) d.users_with_likes.push_back(u);
    }
}

}  // namespace

Dataset load_dataset(const std::string& social_path, const std::string& likes_path) {
    Dataset d;
    Interner users;
    Interner items;

    // Social file: column 1 defines the core users.
    std::unordered_map<UserId, std::vector<UserId>> neighbor_map;
    std::vector<UserId> core_order;
    for_each_pair(social_path, [&](const std::string& a, const std::string& b,
                                   std::size_t line_no) {
        const UserId core = users.get(a);
        const UserId nbr = users.get(b);
        if (core == nbr) {
            ++d.load_summary.self_edges;
            if (neighbor_map.find(core) == neighbor_map.end()) {
                neighbor_map.emplace(core, std::vector<UserId>{});
                core_order.push_back(core);
            }
            (void)line_no;
            return;
        }
        auto [it, inserted] = neighbor_map.try_emplace(core);
        if (inserted) core_order.push_back(core);
        it->second.push_back(nbr);
    });
    if (core_order.empty())
        throw std::runtime_error(social_path + ": no edges found");

    std::vector<std::pair<UserId, std::vector<UserId>>> cores;
    cores.reserve(core_order.size());
    for (UserId core : core_order) {
        auto& nbrs = neighbor_map[core];
        std::sort(nbrs.begin(), nbrs.end());
        const auto dup_begin = std::unique(nbrs.begin(), nbrs.end());
        d.load_summary.duplicate_edges += static_cast<std::size_t>(nbrs.end() - dup_begin);
        nbrs.erase(dup_begin, nbrs.end());
        if (nbrs.empty())
            throw std::runtime_error(social_path + ": core user '" +
                                     users.names[core] + "' has zero neighbors");
        cores.emplace_back(core, std::move(nbrs));
    }

    std::vector<std::pair<UserId, ItemId>> likes;
    for_each_pair(likes_path, [&](const std::string& a, const std::string& b,
                                  std::size_t) {
        likes.emplace_back(users.get(a), items.get(b));
    });

    d.user_names = std::move(users.names);
    d.item_names = std::move(items.names);
    finalize(d, likes, cores);
    return d;
}

void write_dataset(const Dataset& d, const std::string& social_path,
                   const std::string& likes_path) {
    std::ofstream social(social_path);
    if (!social) throw std::runtime_error("cannot write file: " + social_path);
    for (std::size_t ci = 0; ci < d.graph.core_users.size(); ++ci) {
        const UserId core = d.graph.core_users[ci];
        for (UserId nbr : d.graph.neighbor_sets[ci]) {
            social << d.user_names[core] << '\t' << d.user_names[nbr] << '\n';
        }
    }
    if (!social.flush()) throw std::runtime_error("write failed: " + social_path);

    std::ofstream likes(likes_path);
    if (!likes) throw std::runtime_error("cannot write file: " + likes_path);
    for (UserId u = 0; u < d.n_users(); ++u) {
        for (ItemId i : d.prefs.items_of_user[u]) {
            likes << d.user_names[u] << '\t' << d.item_names[i] << '\n';
        }
    }
    if (!likes.flush()) throw std::runtime_error("write failed: " + likes_path);
}

DatasetStats dataset_stats(const Dataset& d) {
    DatasetStats s;
    s.total_users = d.n_users();
    s.total_core_users = d.graph.n_core();
    s.total_likes = d.prefs.like_count;

    std::vector<std::size_t> friend_counts;
    friend_counts.reserve(d.graph.n_core());
    for (const auto& nbrs : d.graph.neighbor_sets) friend_counts.push_back(nbrs.size());
    s.friends_per_user = mean_stddev(friend_counts);

    std::vector<std::size_t> user_likes(d.n_users());
    for (UserId u = 0; u < d.n_users(); ++u) user_likes[u] = d.prefs.user_degree(u);
    s.likes_per_user = mean_stddev(user_likes);

    std::vector<std::size_t> item_likes;
    item_likes.reserve(d.n_items());
    for (ItemId i = 0; i < d.n_items(); ++i) {
        if (d.prefs.item_degree(i) > 0) item_likes.push_back(d.prefs.item_degree(i));
    }
    s.total_items = item_likes.size();
    s.likes_per_item = mean_stddev(item_likes);
    return s;
}

std::vector<std::pair<double, double>> popularity_cdf(const Dataset& d,
                                                      const std::vector<double>& grid) {
    if (d.prefs.like_count == 0)
        throw std::runtime_error("popularity_cdf: dataset has no likes");
    std::vector<std::pair<double, double>> out;
    if (grid.empty()) return out;
    for (double p : grid) {
        if (p < 0.0 || p > 100.0)
            throw std::invalid_argument("popularity_cdf: percentile out of [0,100]");
    }

    std::vector<std::size_t> counts;
    counts.reserve(d.n_items());
    for (ItemId i = 0; i < d.n_items(); ++i) {
        if (d.prefs.item_degree(i) > 0) counts.push_back(d.prefs.item_degree(i));
    }
    std::sort(counts.begin(), counts.end(), std::greater<>());
    std::vector<double> prefix(counts.size() + 1, 0.0);
    for (std::size_t i = 0; i < counts.size(); ++i)
        prefix[i + 1] = prefix[i] + static_cast<double>(counts[i]);
    const double total = prefix.back();

    out.reserve(grid.size());
    for (double p : grid) {
        // Top p% = the ceil(p/100 * n) most-liked items; the epsilon keeps
        // exact multiples from spilling into the next bucket.
        const double raw = p * static_cast<double>(counts.size()) / 100.0;
        auto n_top = static_cast<std::size_t>(std::max(0.0, std::ceil(raw - 1e-9)));
        n_top = std::min(n_top, counts.size());
        out.emplace_back(p, prefix[n_top] / total);
    }
    return out;
}

Dataset generate_synthetic(const SynthParams& p) {
    if (p.n_core == 0 || p.n_fringe == 0 || p.n_items == 0 || p.likes_per_user == 0)
        throw std::invalid_argument("generate_synthetic: all sizes must be positive");
    if (p.likes_per_user > p.n_items)
        throw std::invalid_argument("generate_synthetic: likes_per_user exceeds item universe");
    if (p.alpha < 0.0 || p.alpha > 1.0)
        throw std::invalid_argument("generate_synthetic: alpha must be in [0,1]");

    const std::size_t n_users = p.n_core + p.n_fringe;
    const std::size_t min_f = std::max<std::size_t>(1, std::min(p.min_friends, p.n_fringe));
    const std::size_t max_f = std::max(min_f, std::min(p.max_friends, p.n_fringe));

    // Core users take ids [0, n_core); fringe users follow.
    std::vector<std::vector<UserId>> friends(p.n_core);
    std::vector<UserId> fringe_ids(p.n_fringe);
    for (std::size_t i = 0; i < p.n_fringe; ++i)
        fringe_ids[i] = static_cast<UserId>(p.n_core + i);
    for (std::size_t c = 0; c < p.n_core; ++c) {
        Rng rng(derive_seed(p.seed, {seed_tag::synth_graph, c}));
        const std::size_t count = min_f + static_cast<std::size_t>(rng.below(max_f - min_f + 1));
        friends[c] = rng.sample(fringe_ids, count);
        std::sort(friends[c].begin(), friends[c].end());
    }

    // Likes over the item universe [0, n_items). Fringe users are filled
    // first so that core users always copy from existing likes.
    std::vector<std::vector<std::uint32_t>> raw_likes(n_users);
    std::vector<std::unordered_set<std::uint32_t>> liked(n_users);
    auto draw_uniform_unliked = [&](UserId u, Rng& rng) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const auto item = static_cast<std::uint32_t>(rng.below(p.n_items));
            if (!liked[u].count(item)) return item;
        }
        for (std::uint32_t item = 0; item < p.n_items; ++item) {
            if (!liked[u].count(item)) return item;
        }
        throw std::logic_error("generate_synthetic: item universe exhausted");
    };

    for (UserId u = static_cast<UserId>(p.n_core); u < n_users; ++u) {
        Rng rng(derive_seed(p.seed, {seed_tag::synth_likes, u}));
        while (raw_likes[u].size() < p.likes_per_user) {
            const std::uint32_t item = draw_uniform_unliked(u, rng);
            liked[u].insert(item);
            raw_likes[u].push_back(item);
        }
    }

    for (UserId u = 0; u < static_cast<UserId>(p.n_core); ++u) {
        Rng rng(derive_seed(p.seed, {seed_tag::synth_likes, u}));
        const auto& fr = friends[u];
        while (raw_likes[u].size() < p.likes_per_user) {
            std::uint32_t item = 0;
            bool found = false;
            for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
                if (rng.unit() < p.alpha && !fr.empty()) {
                    const auto& src = raw_likes[fr[rng.below(fr.size())]];
                    if (src.empty()) continue;
                    item = src[rng.below(src.size())];
                } else {
                    item = static_cast<std::uint32_t>(rng.below(p.n_items));
                }
                found = !liked[u].count(item);
            }
            if (!found) {
                // Deterministic fallback; friend items first so alpha=1 keeps
                // every like inside the ego network whenever possible.
                for (UserId f : fr) {
                    for (std::uint32_t cand : raw_likes[f]) {
                        if (!liked[u].count(cand)) {
                            item = cand;
                            found = true;
                            break;
                        }
                    }
                    if (found) break;
                }
                if (!found) item = draw_uniform_unliked(u, rng);
            }
            liked[u].insert(item);
            raw_likes[u].push_back(item);
        }
    }

    // Compress the universe to the items actually liked, in ascending
    // universe order, matching what a round-trip through files preserves.
    std::vector<std::uint32_t> dense_of(p.n_items, UINT32_MAX);
    std::vector<bool> seen(p.n_items, false);
    for (const auto& ls : raw_likes)
        for (auto item : ls) seen[item] = true;
    Dataset d;
    for (std::uint32_t item = 0; item < p.n_items; ++item) {
        if (seen[item]) {
            dense_of[item] = static_cast<std::uint32_t>(d.item_names.size());
            d.item_names.push_back("i" + std::to_string(item));
        }
    }

    d.user_names.reserve(n_users);
    for (std::size_t c = 0; c < p.n_core; ++c) d.user_names.push_back("c" + std::to_string(c));
    for (std::size_t f = 0; f < p.n_fringe; ++f) d.user_names.push_back("f" + std::to_string(f));

    std::vector<std::pair<UserId, ItemId>> likes;
    likes.reserve(n_users * p.likes_per_user);
    for (UserId u = 0; u < n_users; ++u)
        for (auto item : raw_likes[u]) likes.emplace_back(u, dense_of[item]);

    std::vector<std::pair<UserId, std::vector<UserId>>> cores;
    cores.reserve(p.n_core);
    for (UserId c = 0; c < static_cast<UserId>(p.n_core); ++c)
        cores.emplace_back(c, std::move(friends[c]));

    finalize(d, likes, cores);
    return d;
}

}  // namespace egorec
