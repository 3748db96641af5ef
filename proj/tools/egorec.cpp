// egorec — ego-network recommendation and preference-locality toolkit.
//
// Subcommands: stats, similarity, evaluate, locality, synth. All randomness
// flows from --seed; reports are byte-identical for a fixed seed and any
// --workers value (suppress the generation header with --no-timestamp).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "egorec/dataset.hpp"
#include "egorec/locality.hpp"
#include "egorec/recommender.hpp"
#include "egorec/report.hpp"
#include "egorec/similarity.hpp"

namespace {

using namespace egorec;

struct SharedOpts {
    std::string social_path;
    std::string likes_path;
    std::uint64_t seed = 1;
    std::string out_path;
    std::string format = "records";
    unsigned workers = 1;
    bool no_timestamp = false;
};

void add_shared(CLI::App* cmd, SharedOpts& shared, bool inputs_must_exist) {
    auto* social = cmd->add_option("--social", shared.social_path, "social edge file");
    auto* likes = cmd->add_option("--likes", shared.likes_path, "likes file");
    social->required();
    likes->required();
    if (inputs_must_exist) {
        social->check(CLI::ExistingFile);
        likes->check(CLI::ExistingFile);
    }
    cmd->add_option("--seed", shared.seed, "master RNG seed")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--out", shared.out_path, "report path (default: stdout)");
    cmd->add_option("--format", shared.format, "report format")
        ->check(CLI::IsMember({"table", "records"}))
        ->capture_default_str();
    cmd->add_option("--workers", shared.workers, "worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--no-timestamp", shared.no_timestamp,
                  "omit the generation header line");
}

// Writes the report and prints the one-line summary. The summary goes to
// stdout when the report has its own file, to stderr otherwise.
void emit(const SharedOpts& shared, const Report& report, const std::string& summary) {
    const auto format =
        shared.format == "table" ? ReportFormat::table : ReportFormat::records;
    if (shared.out_path.empty()) {
        write_report(std::cout, report, format, !shared.no_timestamp);
        std::cerr << summary << '\n';
    } else {
        std::ofstream out(shared.out_path);
        if (!out) throw std::runtime_error("cannot write report: " + shared.out_path);
        write_report(out, report, format, !shared.no_timestamp);
        if (!out.flush()) throw std::runtime_error("write failed: " + shared.out_path);
        std::cout << summary << " -> " << shared.out_path << '\n';
    }
}

std::string load_note(const Dataset& d) {
    const auto& s = d.load_summary;
    std::ostringstream note;
    note << d.n_users() << " users, " << d.graph.n_core() << " core, " << d.n_items()
         << " items, " << d.prefs.like_count << " likes";
    if (s.duplicate_edges) note << ", " << s.duplicate_edges << " duplicate edges";
    if (s.self_edges) note << ", " << s.self_edges << " self edges dropped";
    if (s.duplicate_likes) note << ", " << s.duplicate_likes << " duplicate likes";
    if (s.dropped_core_users)
        note << ", " << s.dropped_core_users << " core users dropped (no likes)";
    return note.str();
}

PoolKind parse_pool(const std::string& name) {
    if (name == "friends") return PoolKind::friends;
    if (name == "non-friends") return PoolKind::non_friends;
    if (name == "full") return PoolKind::full_network;
    if (name == "random") return PoolKind::random_k;
    throw CLI::ValidationError("--pool", "unknown pool: " + name);
}

int run_stats(const SharedOpts& shared, const std::vector<double>& cdf_grid) {
    const auto d = load_dataset(shared.social_path, shared.likes_path);
    const auto s = dataset_stats(d);

    Report report;
    report.columns = {"statistic", "value"};
    report.add_row({"total_users", format_count(s.total_users)});
    report.add_row({"total_core_users", format_count(s.total_core_users)});
    report.add_row({"friends_per_user_mean", format_real(s.friends_per_user.first)});
    report.add_row({"friends_per_user_stddev", format_real(s.friends_per_user.second)});
    report.add_row({"total_items", format_count(s.total_items)});
    report.add_row({"total_likes", format_count(s.total_likes)});
    report.add_row({"likes_per_user_mean", format_real(s.likes_per_user.first)});
    report.add_row({"likes_per_user_stddev", format_real(s.likes_per_user.second)});
    report.add_row({"likes_per_item_mean", format_real(s.likes_per_item.first)});
    report.add_row({"likes_per_item_stddev", format_real(s.likes_per_item.second)});
    if (!cdf_grid.empty()) {
        for (const auto& [p, share] : popularity_cdf(d, cdf_grid)) {
            std::ostringstream name;
            name << "popularity_cdf_" << format_real(p);
            report.add_row({name.str(), format_real(share)});
        }
    }
    emit(shared, report, "stats: " + load_note(d));
    return 0;
}

int run_similarity(const SharedOpts& shared, const std::vector<std::size_t>& k_values,
                   std::size_t repeats) {
    const auto d = load_dataset(shared.social_path, shared.likes_path);

    Report report;
    report.columns = {"metric", "pool", "k", "value"};
    for (std::size_t k : k_values) {
        for (PoolKind kind : {PoolKind::friends, PoolKind::non_friends}) {
            const double v = avg_topk_similarity(d, k, kind, shared.workers);
            report.add_row({"avg_topk_similarity", pool_kind_label(kind),
                            format_count(k), format_real(v)});
        }
    }
    const auto [f, r] = friend_vs_random_similarity(d, repeats, shared.seed, shared.workers);
    report.add_row({"friend_vs_random", "friends", "", format_real(f)});
    report.add_row({"friend_vs_random", "random", "", format_real(r)});

    emit(shared, report,
         "similarity: " + std::to_string(k_values.size()) + " k values, " +
             std::to_string(repeats) + " repeats, " + load_note(d));
    return 0;
}

int run_evaluate(const SharedOpts& shared, const std::vector<std::string>& pools,
                 const std::vector<std::size_t>& k_values, std::size_t n_splits,
                 double ratio, std::size_t list_len) {
    const auto d = load_dataset(shared.social_path, shared.likes_path);

    Report report;
    report.columns = {"condition", "k",        "split",    "n_users",
                      "n_skipped", "mean_ndcg", "std_ndcg"};
    std::size_t n_users = 0, n_skipped = 0;
    for (const auto& pool_name : pools) {
        NeighborPoolSpec spec;
        spec.kind = parse_pool(pool_name);
        if (spec.kind == PoolKind::random_k) spec.random_base = PoolKind::full_network;
        for (std::size_t k : k_values) {
            EvalOptions opts;
            opts.pool = spec;
            opts.k = k;
            opts.list_len = list_len;
            opts.n_splits = n_splits;
            opts.ratio = ratio;
            opts.seed = shared.seed;
            opts.workers = shared.workers;
            const auto res = evaluate(d, opts);
            n_users = res.n_users;
            n_skipped = res.n_skipped;
            for (std::size_t s = 0; s < res.n_splits; ++s) {
                report.add_row({pool_name, format_count(k), format_count(s),
                                format_count(res.n_users), format_count(res.n_skipped),
                                format_real(res.split_means[s]),
                                format_real(res.split_stds[s])});
            }
            report.add_row({pool_name, format_count(k), "aggregate",
                            format_count(res.n_users), format_count(res.n_skipped),
                            format_real(res.mean_ndcg), format_real(res.std_ndcg)});
        }
    }
    emit(shared, report,
         "evaluate: " + std::to_string(pools.size()) + " pools x " +
             std::to_string(k_values.size()) + " k values, " + std::to_string(n_users) +
             " users evaluated (" + std::to_string(n_skipped) + " skipped)");
    return 0;
}

int run_locality(const SharedOpts& shared, const std::string& null_name,
                 std::size_t replicates) {
    const auto d = load_dataset(shared.social_path, shared.likes_path);

    LocalityOptions opts;
    opts.replicates = replicates;
    opts.seed = shared.seed;
    opts.workers = shared.workers;
    std::string item_label;
    if (null_name == "uniform") {
        opts.item_model = ItemNullModel::uniform;
        item_label = null_model_label(NullModel::item_uniform);
    } else if (null_name == "degree-preserving") {
        opts.item_model = ItemNullModel::degree_preserving;
        item_label = null_model_label(NullModel::item_degree_preserving);
    } else {  // friend-rewire: skip the item-randomization ratio
        opts.include_item_ratio = false;
    }
    const auto rep = locality_report(d, opts);

    Report report;
    report.columns = {"metric", "null_model", "replicate", "value"};
    report.add_row({"friends_similarity", "none", "aggregate",
                    format_real(rep.friends_similarity)});
    report.add_row({"random_similarity", "none", "aggregate",
                    format_real(rep.random_similarity)});
    report.add_row({"ego_sparsity", "none", "aggregate", format_real(rep.ego_sparsity)});
    report.add_row({"network_sparsity", "none", "aggregate",
                    format_real(rep.network_sparsity)});
    report.add_row({"uncovered_ego", "none", "aggregate", format_real(rep.uncovered_ego)});
    if (rep.has_item_ratio) {
        for (std::size_t r = 0; r < rep.random_item_ego.replicate_ratios.size(); ++r) {
            report.add_row({"random_item_ego", item_label, format_count(r),
                            format_real(rep.random_item_ego.replicate_ratios[r])});
        }
        report.add_row({"random_item_ego", item_label, "aggregate",
                        format_real(rep.random_item_ego.ratio)});
    }
    const std::string friend_label = null_model_label(NullModel::friend_rewire);
    for (std::size_t r = 0; r < rep.random_friend_ego.replicate_ratios.size(); ++r) {
        report.add_row({"random_friend_ego", friend_label, format_count(r),
                        format_real(rep.random_friend_ego.replicate_ratios[r])});
    }
    report.add_row({"random_friend_ego", friend_label, "aggregate",
                    format_real(rep.random_friend_ego.ratio)});

    std::ostringstream summary;
    summary << "locality: " << replicates << " replicates";
    if (rep.random_friend_ego.n_items_excluded > 0) {
        summary << ", " << rep.random_friend_ego.n_items_excluded
                << " items outside every ego network excluded from ratios";
    }
    summary << ", " << load_note(d);
    emit(shared, report, summary.str());
    return 0;
}

int run_synth(const SharedOpts& shared, const SynthParams& params) {
    auto p = params;
    p.seed = shared.seed;
    const auto d = generate_synthetic(p);
    write_dataset(d, shared.social_path, shared.likes_path);
    std::cout << "synth: wrote " << d.n_users() << " users (" << d.graph.n_core()
              << " core), " << d.n_items() << " items, " << d.prefs.like_count
              << " likes -> " << shared.social_path << ", " << shared.likes_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ego-network recommendation and preference-locality toolkit"};
    app.require_subcommand(1);

    // stats
    SharedOpts stats_shared;
    std::vector<double> cdf_grid;
    auto* stats_cmd = app.add_subcommand("stats", "dataset overview statistics");
    add_shared(stats_cmd, stats_shared, true);
    stats_cmd->add_option("--cdf-grid", cdf_grid,
                          "percentiles for the popularity CDF series")
        ->delimiter(',');

    // similarity
    SharedOpts sim_shared;
    std::vector<std::size_t> sim_k{10, 20, 30, 40, 50};
    std::size_t sim_repeats = 10;
    auto* sim_cmd = app.add_subcommand("similarity", "top-k and friend-vs-random Jaccard");
    add_shared(sim_cmd, sim_shared, true);
    sim_cmd->add_option("--k", sim_k, "k values for top-k similarity")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--repeats", sim_repeats, "non-friend resamples")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // evaluate
    SharedOpts eval_shared;
    std::vector<std::string> eval_pools{"friends", "non-friends", "full"};
    std::vector<std::size_t> eval_k{10, 20, 30, 40, 50};
    std::size_t eval_splits = 10, eval_list_len = 10;
    double eval_ratio = 0.7;
    auto* eval_cmd = app.add_subcommand("evaluate", "k-nn recommendation NDCG");
    add_shared(eval_cmd, eval_shared, true);
    eval_cmd->add_option("--pool", eval_pools, "neighbor pools to evaluate")
        ->delimiter(',')
        ->check(CLI::IsMember({"friends", "non-friends", "full", "random"}));
    eval_cmd->add_option("--k", eval_k, "neighbor counts")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    eval_cmd->add_option("--splits", eval_splits, "train/test splits")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval_cmd->add_option("--ratio", eval_ratio, "train fraction")
        ->check(CLI::Validator(
            [](const std::string& s) {
                const double v = std::stod(s);
                return v > 0.0 && v < 1.0 ? std::string{}
                                          : std::string("must be strictly between 0 and 1");
            },
            "FRACTION"))
        ->capture_default_str();
    eval_cmd->add_option("--list-len", eval_list_len, "recommendation list length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // locality
    SharedOpts loc_shared;
    std::string loc_null = "degree-preserving";
    std::size_t loc_replicates = 10;
    auto* loc_cmd = app.add_subcommand("locality", "preference-locality metrics");
    add_shared(loc_cmd, loc_shared, true);
    loc_cmd->add_option("--null", loc_null, "null model for the item/ego ratio")
        ->check(CLI::IsMember({"uniform", "degree-preserving", "friend-rewire"}))
        ->capture_default_str();
    loc_cmd->add_option("--replicates", loc_replicates, "null-model replicates")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // synth
    SharedOpts synth_shared;
    SynthParams synth_params;
    auto* synth_cmd =
        app.add_subcommand("synth", "generate a planted-locality dataset (writes "
                                    "--social/--likes)");
    add_shared(synth_cmd, synth_shared, false);
    synth_cmd->add_option("--cores", synth_params.n_core, "core users")
        ->required()
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--fringe", synth_params.n_fringe, "fringe users")
        ->required()
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--items", synth_params.n_items, "item universe")
        ->required()
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--likes-per-user", synth_params.likes_per_user,
                          "likes per user")
        ->required()
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--alpha", synth_params.alpha, "friend-copy probability")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--min-friends", synth_params.min_friends, "min friends per core")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--max-friends", synth_params.max_friends, "max friends per core")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (stats_cmd->parsed()) return run_stats(stats_shared, cdf_grid);
        if (sim_cmd->parsed()) return run_similarity(sim_shared, sim_k, sim_repeats);
        if (eval_cmd->parsed())
            return run_evaluate(eval_shared, eval_pools, eval_k, eval_splits, eval_ratio,
                                eval_list_len);
        if (loc_cmd->parsed()) return run_locality(loc_shared, loc_null, loc_replicates);
        if (synth_cmd->parsed()) return run_synth(synth_shared, synth_params);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
