#include "commands.hpp"

#include <omp.h>

#include <CLI11.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <tuple>
#include <sstream>

#include "config.hpp"
#include "sqrs/fisher.hpp"
#include "sqrs/inference.hpp"
#include "sqrs/io.hpp"
#include "sqrs/montecarlo.hpp"
#include "sqrs/optimizer.hpp"
#include "sqrs/security.hpp"

namespace sqrs::cli {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kSimTruthStream = 0x51A7;
constexpr std::uint64_t kSimRunStream = 0x51A;
constexpr std::uint64_t kMapStream = 0x5E0;
constexpr std::uint64_t kFigureStream = 0xF16;

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// NaN and infinities have no JSON spelling; they become null.
ojson jnum(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

std::string out_path(const RunContext &ctx, const std::string &name) {
    return (std::filesystem::path(ctx.out_dir) / name).string();
}

Section open_root(const nlohmann::json &config) {
    Section root(config, "config");
    root.ignore("seed");
    return root;
}

std::size_t read_bins(Section &s) {
    int k = s.get_or<int>("grid_bins", static_cast<int>(kDefaultGridBins));
    if (k < 4 || !std::has_single_bit(static_cast<unsigned>(k))) s.fail("grid_bins", "must be a power of two >= 4");
    return static_cast<std::size_t>(k);
}

DetectionModel read_model(Section &s) {
    std::string m = s.get_or<std::string>("model", "published");
    if (m == "published") return DetectionModel::Published;
    if (m == "exact") return DetectionModel::Exact;
    s.fail("model", "expected \"published\" or \"exact\"");
}

std::vector<AttackKind> read_strategies(Section &s, const std::string &key, std::vector<AttackKind> fallback) {
    if (!s.has(key)) {
        s.ignore(key);
        return fallback;
    }
    std::vector<AttackKind> out;
    auto names = s.list<std::string>(key);
    if (names.empty()) s.fail(key, "must not be empty");
    for (const auto &n : names) {
        try {
            out.push_back(parse_attack(n));
        } catch (const std::invalid_argument &e) {
            s.fail(key, e.what());
        }
    }
    return out;
}

std::vector<int> read_positive_list(Section &s, const std::string &key) {
    auto v = s.list<int>(key);
    if (v.empty()) s.fail(key, "must not be empty");
    for (int x : v)
        if (x < 1) s.fail(key, "entries must be positive integers");
    return v;
}

void read_curve(Section &s, CurveOptions &c, std::size_t bins) {
    if (s.has("curve_repetitions")) c.repetitions = s.positive_int("curve_repetitions");
    else s.ignore("curve_repetitions");
    if (s.has("n_cap")) c.n_cap = s.positive_int("n_cap");
    else s.ignore("n_cap");
    c.bins = bins;
}

ojson point_json(const GridPointResult &p) {
    ojson j;
    j["p_s"] = p.p_s;
    j["p_f"] = p.p_f;
    j["lambda_a"] = jnum(p.lambda_a);
    j["lambda_a_se"] = jnum(p.lambda_a_se);
    j["lambda_e"] = jnum(p.lambda_e);
    j["lambda_e_se"] = jnum(p.lambda_e_se);
    j["undetected_fraction"] = jnum(p.undetected_fraction);
    j["mean_rounds"] = jnum(p.mean_rounds_to_detection);
    j["lambda_e_bound"] = jnum(p.lambda_e_bound);
    j["feasible"] = p.feasible;
    j["level"] = p.level;
    return j;
}

ojson stats_json(const SampleStats &s) {
    if (s.count == 0) return nullptr;
    return ojson{{"mean", jnum(s.mean)}, {"std_error", jnum(s.std_error)}, {"count", s.count}};
}

void write_columns(const RunContext &ctx, const std::string &name,
                   std::initializer_list<std::pair<const char *, const char *>> cols) {
    std::ostringstream os;
    for (const auto &[c, d] : cols) os << c << ": " << d << "\n";
    write_text_file(out_path(ctx, name), os.str());
}

/// Representative point for a figure row: the optimum, or the most secure point seen.
GridPointResult headline(const SearchResult &r) {
    if (r.best) return *r.best;
    const auto &pool = r.infeasibility_frontier.empty() ? r.log : r.infeasibility_frontier;
    return *std::max_element(pool.begin(), pool.end(),
                             [](const auto &a, const auto &b) { return a.lambda_e < b.lambda_e; });
}

struct ExecutionOutcome {
    double theta = 0.0;
    int rounds = 0;
    bool detected = false;
    double lambda_alice = 0.0;
    double lambda_eve = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace

int cmd_simulate(const nlohmann::json &config, const RunContext &ctx) {
    Section root = open_root(config);
    ProtocolParams params = read_protocol(root.child("protocol"));
    std::optional<AttackStrategy> attack;
    if (root.has("attack")) attack = read_attack(root.child("attack"));
    else root.ignore("attack");
    const int executions = root.get_or<int>("executions", 1);
    if (executions < 1) root.fail("executions", "must be a positive integer");
    const bool stop = root.get_or<bool>("stop_on_detection", attack.has_value());
    const int transcripts = root.get_or<int>("transcripts", 1);
    if (transcripts < 0 || transcripts > executions) root.fail("transcripts", "must lie in [0, executions]");
    const std::size_t bins = read_bins(root);
    root.finish();
    params.validate();

    const auto truths = generate_truth_sets(params.n_bobs, executions, derive_seed(ctx.seed, {kSimTruthStream}));
    std::vector<ExecutionOutcome> outcomes(executions);
    std::vector<std::vector<RoundTranscript>> kept(transcripts);
    std::optional<LikelihoodGrid> alice_grid, eve_grid;

#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < executions; ++i) {
        Rng rng = make_stream(ctx.seed, {kSimRunStream, static_cast<std::uint64_t>(i)});
        auto rounds = run_protocol(params, truths[i], attack, stop, rng);
        ExecutionOutcome &o = outcomes[i];
        o.theta = truths[i].theta().value();
        o.rounds = static_cast<int>(rounds.size());
        o.detected = std::any_of(rounds.begin(), rounds.end(), [](const auto &r) { return r.detected; });
        LikelihoodGrid ga = theta_posterior(alice_evidence(rounds), params.n_bobs, bins);
        o.lambda_alice = lambda_dispersion(ga, o.theta);
        std::optional<LikelihoodGrid> ge;
        if (attack) {
            ge = theta_posterior(eve_evidence(rounds), params.n_bobs, bins);
            o.lambda_eve = lambda_dispersion(*ge, o.theta);
        }
        if (i == 0) {
            alice_grid = std::move(ga);
            eve_grid = std::move(ge);
        }
        if (i < transcripts) kept[i] = std::move(rounds);
    }

    for (int i = 0; i < transcripts; ++i)
        write_text_file(out_path(ctx, "transcript_" + std::to_string(i) + ".jsonl"), transcript_to_jsonl(kept[i]));
    write_text_file(out_path(ctx, "posterior_alice.csv"), alice_grid->to_csv());
    if (eve_grid) write_text_file(out_path(ctx, "posterior_eve.csv"), eve_grid->to_csv());

    std::ostringstream csv;
    csv << "execution,theta,rounds,detected,lambda_alice,lambda_eve\n";
    std::vector<double> la, le, rtd;
    int detected = 0;
    for (int i = 0; i < executions; ++i) {
        const auto &o = outcomes[i];
        csv << i << "," << num(o.theta) << "," << o.rounds << "," << (o.detected ? 1 : 0) << ","
            << num(o.lambda_alice) << "," << (attack ? num(o.lambda_eve) : "") << "\n";
        la.push_back(o.lambda_alice);
        if (attack) le.push_back(o.lambda_eve);
        if (o.detected) {
            ++detected;
            rtd.push_back(o.rounds);
        }
    }
    write_text_file(out_path(ctx, "lambdas.csv"), csv.str());

    ojson s;
    s["command"] = "simulate";
    s["seed"] = ctx.seed;
    s["n_bobs"] = params.n_bobs;
    s["n_rounds"] = params.n_rounds;
    s["p_separable"] = params.p_separable;
    s["p_fidelity"] = params.p_fidelity;
    s["attack"] = attack ? ojson{{"strategy", attack_name(attack->kind)}, {"attack_probability", attack->attack_probability}}
                         : ojson(nullptr);
    s["executions"] = executions;
    s["stop_on_detection"] = stop;
    s["detected_count"] = detected;
    s["undetected_fraction"] = 1.0 - static_cast<double>(detected) / executions;
    s["rounds_to_detection"] = stats_json(SampleStats::of(rtd));
    s["lambda_alice"] = stats_json(SampleStats::of(la));
    s["lambda_eve"] = attack ? stats_json(SampleStats::of(le)) : ojson(nullptr);
    write_text_file(out_path(ctx, "summary.json"), s.dump(2) + "\n");
    return kExitOk;
}

int cmd_security_map(const nlohmann::json &config, const RunContext &ctx) {
    Section root = open_root(config);
    auto strategies = read_strategies(root, "strategies", {});
    auto n_bobs = read_positive_list(root, "n_bobs");
    const int points = root.get<int>("points");
    if (points < 2) root.fail("points", "must be at least 2");
    const double attack_p = root.has("attack_probability") ? root.probability("attack_probability") : 1.0;
    const DetectionModel model = read_model(root);
    CurveOptions curve;
    read_curve(root, curve, read_bins(root));
    root.finish();

    for (AttackKind kind : strategies) {
        AttackStrategy st{kind, attack_p};
        for (int nb : n_bobs) {
            auto rows = security_map(st, nb, points, curve,
                                     derive_seed(ctx.seed, {kMapStream, static_cast<std::uint64_t>(kind),
                                                            static_cast<std::uint64_t>(nb)}),
                                     model);
            std::string name = "security_map_" + std::string(attack_name(kind)) + "_nb" + std::to_string(nb) + ".csv";
            write_text_file(out_path(ctx, name), security_map_csv(rows));
        }
    }
    return kExitOk;
}

namespace {

SearchConfig read_search(Section &root, int n_bobs, int n_rounds) {
    SearchConfig c;
    c.n_bobs = n_bobs;
    c.n_rounds = n_rounds;
    c.strategy = read_attack(root.child("attack"));
    if (root.has("approach")) {
        try {
            c.approach = parse_approach(root.get<std::string>("approach"));
        } catch (const std::invalid_argument &e) {
            root.fail("approach", e.what());
        }
    } else {
        root.ignore("approach");
    }
    read_search_settings(root, c);
    c.grid_bins = read_bins(root);
    c.curve.bins = c.grid_bins;
    return c;
}

}  // namespace

int cmd_optimize(const nlohmann::json &config, const RunContext &ctx) {
    Section root = open_root(config);
    const int nb = root.positive_int("n_bobs");
    const int nr = root.positive_int("n_rounds");
    SearchConfig c = read_search(root, nb, nr);
    root.finish();
    c.validate();

    SearchResult r = refine_search(c, ctx.seed);
    write_text_file(out_path(ctx, "evaluation_log.csv"), evaluation_log_csv(r.log));

    ojson s;
    s["command"] = "optimize";
    s["seed"] = ctx.seed;
    s["n_bobs"] = c.n_bobs;
    s["n_rounds"] = c.n_rounds;
    s["approach"] = approach_name(c.approach);
    s["strategy"] = attack_name(c.strategy.kind);
    s["lambda_e_threshold"] = c.lambda_e_threshold;
    s["points_evaluated"] = r.log.size();
    if (r.best) {
        s["feasible"] = true;
        s["best"] = point_json(*r.best);
        write_text_file(out_path(ctx, "best.json"), s.dump(2) + "\n");
        return kExitOk;
    }
    s["feasible"] = false;
    ojson frontier = ojson::array();
    for (const auto &p : r.infeasibility_frontier) frontier.push_back(point_json(p));
    s["frontier"] = std::move(frontier);
    write_text_file(out_path(ctx, "infeasibility.json"), s.dump(2) + "\n");
    std::cerr << "no point reaches lambda_e >= " << c.lambda_e_threshold << "; see infeasibility.json\n";
    return kExitInfeasible;
}

int cmd_fisher(const nlohmann::json &config, const RunContext &ctx) {
    Section root = open_root(config);
    ProtocolParams base;
    base.n_bobs = root.positive_int("n_bobs");
    base.n_rounds = root.positive_int("n_rounds");
    const int points = root.get<int>("points");
    if (points < 2) root.fail("points", "must be at least 2");
    std::optional<int> n_cr;
    if (root.has("n_cr")) n_cr = root.positive_int("n_cr");
    else root.ignore("n_cr");
    root.finish();

    std::ostringstream csv;
    csv << "p_s,p_f,i_total,crb,unbounded";
    if (n_cr) csv << ",rounds_for_validity";
    csv << "\n";
    for (int i = 0; i < points; ++i) {
        for (int j = 0; j < points; ++j) {
            ProtocolParams p = base;
            p.p_separable = static_cast<double>(i) / (points - 1);
            p.p_fidelity = static_cast<double>(j) / (points - 1);
            const double info = total_information(p).total;
            const auto crb = crb_variance(p, p.n_rounds);
            csv << num(p.p_separable) << "," << num(p.p_fidelity) << "," << num(info) << ","
                << (crb ? num(*crb) : "inf") << "," << (crb ? 0 : 1);
            if (n_cr) {
                double worst = -1.0;
                for (int m = 1; m <= p.n_bobs; ++m)
                    if (auto r = rounds_for_crb_validity(m, p, *n_cr)) worst = std::max(worst, *r);
                csv << "," << (worst < 0 ? "inf" : num(worst));
            }
            csv << "\n";
        }
    }
    write_text_file(out_path(ctx, "fisher.csv"), csv.str());
    return kExitOk;
}

namespace {

int figure_optimization(int id, Section &root, const RunContext &ctx) {
    auto n_bobs = read_positive_list(root, "n_bobs");
    auto n_rounds = read_positive_list(root, "n_rounds");
    std::vector<Approach> approaches{Approach::SeparableOnly, Approach::EntangledOnly, Approach::Hybrid};
    if (root.has("approaches")) {
        approaches.clear();
        for (const auto &a : root.list<std::string>("approaches")) {
            try {
                approaches.push_back(parse_approach(a));
            } catch (const std::invalid_argument &e) {
                root.fail("approaches", e.what());
            }
        }
        if (approaches.empty()) root.fail("approaches", "must not be empty");
    } else {
        root.ignore("approaches");
    }
    SearchConfig proto = read_search(root, 1, 1);
    root.finish();

    std::ostringstream csv;
    if (id == 2)
        csv << "n_bobs,n_rounds,approach,feasible,p_s,p_f,lambda_a,lambda_a_se,lambda_e,lambda_e_se\n";
    else
        csv << "n_bobs,n_rounds,approach,feasible,undetected_fraction,mean_rounds,p_f,p_s\n";
    for (int nb : n_bobs) {
        for (int nr : n_rounds) {
            for (Approach a : approaches) {
                SearchConfig c = proto;
                c.n_bobs = nb;
                c.n_rounds = nr;
                c.approach = a;
                c.validate();
                // Same stream for every approach, so the three share their noise.
                auto r = refine_search(c, derive_seed(ctx.seed, {kFigureStream, static_cast<std::uint64_t>(nb),
                                                                 static_cast<std::uint64_t>(nr)}));
                GridPointResult p = headline(r);
                csv << nb << "," << nr << "," << approach_name(a) << "," << (r.best ? 1 : 0) << ",";
                if (id == 2)
                    csv << num(p.p_s) << "," << num(p.p_f) << "," << num(p.lambda_a) << "," << num(p.lambda_a_se) << ","
                        << num(p.lambda_e) << "," << num(p.lambda_e_se) << "\n";
                else
                    csv << num(p.undetected_fraction) << "," << num(p.mean_rounds_to_detection) << "," << num(p.p_f)
                        << "," << num(p.p_s) << "\n";
            }
        }
    }
    write_text_file(out_path(ctx, "fig" + std::to_string(id) + ".csv"), csv.str());
    if (id == 2)
        write_columns(ctx, "fig2_columns.txt",
                      {{"n_bobs", "number of Bobs"},
                       {"n_rounds", "round budget of each execution"},
                       {"approach", "hybrid, separable-only or entangled-only"},
                       {"feasible", "1 if some point met the lambda_e threshold; otherwise the row shows the most secure point"},
                       {"p_s", "separable-state probability at the optimum"},
                       {"p_f", "fidelity-check probability at the optimum"},
                       {"lambda_a", "Alice's mean dispersion"},
                       {"lambda_a_se", "standard error of lambda_a"},
                       {"lambda_e", "Eve's mean dispersion"},
                       {"lambda_e_se", "standard error of lambda_e"}});
    else
        write_columns(ctx, "fig3_columns.txt",
                      {{"n_bobs", "number of Bobs"},
                       {"n_rounds", "round budget of each execution"},
                       {"approach", "hybrid, separable-only or entangled-only"},
                       {"feasible", "1 if some point met the lambda_e threshold"},
                       {"undetected_fraction", "fraction of attacked executions that never detected Eve"},
                       {"mean_rounds", "mean 1-based round of first detection, nan if never detected"},
                       {"p_f", "fidelity-check probability at the optimum"},
                       {"p_s", "separable-state probability at the optimum"}});
    return kExitOk;
}

int figure_rounds(Section &root, const RunContext &ctx) {
    auto n_bobs = read_positive_list(root, "n_bobs");
    auto n_rounds = read_positive_list(root, "n_rounds");
    MonteCarloOptions mc;
    mc.repetitions = root.positive_int("repetitions");
    const int truth_sets = root.positive_int("truth_sets");
    mc.bins = read_bins(root);
    // Optional hybrid operating points, one per Bob count.
    std::map<int, std::pair<double, double>> hybrid;
    if (root.has("hybrid")) {
        for (Section h : root.objects("hybrid")) {
            int nb = h.positive_int("n_bobs");
            double ps = h.probability("p_s");
            double pf = h.probability("p_f");
            h.finish();
            hybrid[nb] = {ps, pf};
        }
    } else {
        root.ignore("hybrid");
    }
    root.finish();

    std::ostringstream csv;
    csv << "n_bobs,series,n_rounds,p_s,p_f,lambda_a,lambda_a_se,crb_variance,crb_half\n";
    for (int nb : n_bobs) {
        const std::uint64_t s = derive_seed(ctx.seed, {kFigureStream, 4, static_cast<std::uint64_t>(nb)});
        const auto truths = generate_truth_sets(nb, truth_sets, derive_seed(s, {0}));
        std::vector<std::tuple<std::string, double, double>> series{{"separable", 1.0, 0.0}, {"entangled", 0.0, 0.0}};
        if (auto it = hybrid.find(nb); it != hybrid.end()) series.emplace_back("hybrid", it->second.first, it->second.second);
        for (const auto &[name, ps, pf] : series) {
            for (int nr : n_rounds) {
                ProtocolParams p{nb, nr, ps, pf};
                p.validate();
                SampleStats st = simulate_alice(p, truths, mc, derive_seed(s, {1}));
                auto crb = crb_variance(p, nr);
                csv << nb << "," << name << "," << nr << "," << num(ps) << "," << num(pf) << "," << num(st.mean) << ","
                    << num(st.std_error) << "," << (crb ? num(*crb) : "inf") << ","
                    << (crb ? num(*crb / 2) : "inf") << "\n";
            }
        }
    }
    write_text_file(out_path(ctx, "fig4.csv"), csv.str());
    write_columns(ctx, "fig4_columns.txt",
                  {{"n_bobs", "number of Bobs"},
                   {"series", "separable (P_S=1, P_F=0), entangled (P_S=0, P_F=0) or hybrid (configured point)"},
                   {"n_rounds", "rounds per execution"},
                   {"p_s", "separable-state probability"},
                   {"p_f", "fidelity-check probability"},
                   {"lambda_a", "Alice's mean dispersion over honest executions"},
                   {"lambda_a_se", "standard error of lambda_a"},
                   {"crb_variance", "Cramer-Rao variance bound for these parameters"},
                   {"crb_half", "crb_variance / 2, the dispersion it corresponds to for small errors"}});
    return kExitOk;
}

int figure_single_bob(Section &root, const RunContext &ctx) {
    const int points = root.get<int>("p_f_points");
    if (points < 2) root.fail("p_f_points", "must be at least 2");
    // With one Bob both probe kinds are the same state; resending the kind Alice sent
    // (P_S = 1 with separable resends) is the matched attack.
    auto strategies = read_strategies(root, "strategies",
                                      {AttackKind::MeasureResendSeparable, AttackKind::ReplaceSeparable});
    const double ps = root.has("p_s") ? root.probability("p_s") : 1.0;
    const DetectionModel model = read_model(root);
    CurveOptions curve;
    read_curve(root, curve, read_bins(root));
    root.finish();

    std::ostringstream csv;
    csv << "strategy,p_f,detection_rate,bound\n";
    for (AttackKind kind : strategies) {
        AttackStrategy st{kind, 1.0};
        for (int j = 0; j < points; ++j) {
            ProtocolParams p{1, 1, ps, static_cast<double>(j) / (points - 1)};
            auto c = build_lambda_curve(st, 1, p.p_fidelity, curve,
                                        derive_seed(ctx.seed, {kFigureStream, 5, static_cast<std::uint64_t>(kind),
                                                               static_cast<std::uint64_t>(j)}));
            auto d = per_round_rates(st, p, model);
            csv << attack_name(kind) << "," << num(p.p_fidelity) << "," << num(d.d_s + d.d_e) << ","
                << num(lambda_e_lower_bound(st, p, c, model)) << "\n";
        }
    }
    write_text_file(out_path(ctx, "fig5.csv"), csv.str());
    write_columns(ctx, "fig5_columns.txt",
                  {{"strategy", "Eve's attack"},
                   {"p_f", "fidelity-check probability"},
                   {"detection_rate", "per-round probability that Alice detects Eve"},
                   {"bound", "lower bound on Eve's mean dispersion for one Bob"}});
    return kExitOk;
}

int figure_network_map(Section &root, const RunContext &ctx) {
    auto n_bobs = read_positive_list(root, "n_bobs");
    const int points = root.get<int>("points");
    if (points < 2) root.fail("points", "must be at least 2");
    AttackKind kind = AttackKind::MeasureResendEntangled;
    if (root.has("strategy")) {
        try {
            kind = parse_attack(root.get<std::string>("strategy"));
        } catch (const std::invalid_argument &e) {
            root.fail("strategy", e.what());
        }
    } else {
        root.ignore("strategy");
    }
    const DetectionModel model = read_model(root);
    CurveOptions curve;
    read_curve(root, curve, read_bins(root));
    root.finish();

    std::ostringstream csv;
    csv << "n_bobs,p_s,p_f,bound\n";
    for (int nb : n_bobs) {
        auto rows = security_map(AttackStrategy{kind, 1.0}, nb, points, curve,
                                 derive_seed(ctx.seed, {kFigureStream, 6, static_cast<std::uint64_t>(nb)}), model);
        for (const auto &r : rows) csv << nb << "," << num(r.p_s) << "," << num(r.p_f) << "," << num(r.bound) << "\n";
    }
    write_text_file(out_path(ctx, "fig6.csv"), csv.str());
    write_columns(ctx, "fig6_columns.txt",
                  {{"n_bobs", "number of Bobs"},
                   {"p_s", "separable-state probability"},
                   {"p_f", "fidelity-check probability"},
                   {"bound", "lower bound on Eve's mean dispersion under the configured attack"}});
    return kExitOk;
}

}  // namespace

int cmd_figure(int figure_id, const nlohmann::json &config, const RunContext &ctx) {
    if (figure_id < 2 || figure_id > 6) throw ConfigError("figure id must be one of 2, 3, 4, 5, 6; got " + std::to_string(figure_id));
    Section root = open_root(config);
    switch (figure_id) {
        case 2:
        case 3: return figure_optimization(figure_id, root, ctx);
        case 4: return figure_rounds(root, ctx);
        case 5: return figure_single_bob(root, ctx);
        default: return figure_network_map(root, ctx);
    }
}

int run(int argc, char **argv) {
    CLI::App app{"Simulator for secure remote sensing of a phase sum across a network"};
    app.require_subcommand(1);
    std::string config_path;
    std::optional<std::uint64_t> seed_flag;
    std::string out_dir = "out";
    int threads = 0;
    app.add_option("--config", config_path, "JSON configuration file")->required();
    app.add_option("--seed", seed_flag, "master seed (overrides the config's \"seed\")");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (0 keeps the OpenMP default)")->check(CLI::NonNegativeNumber);
    app.fallthrough();

    auto *sim = app.add_subcommand("simulate", "run executions and write transcripts, posteriors and a summary");
    auto *map = app.add_subcommand("security-map", "lower bounds on Eve's dispersion over (P_S, P_F)");
    auto *opt = app.add_subcommand("optimize", "minimize Alice's dispersion subject to the security threshold");
    auto *fish = app.add_subcommand("fisher", "Fisher information and Cramer-Rao bound over (P_S, P_F)");
    auto *fig = app.add_subcommand("figure", "regenerate the data behind one figure");
    int figure_id = 0;
    fig->add_option("id", figure_id, "figure number, 2 to 6")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (threads > 0) omp_set_num_threads(threads);
        nlohmann::json config = load_config_file(config_path);
        if (!config.is_object()) throw ConfigError("config: expected an object");
        RunContext ctx;
        ctx.out_dir = out_dir;
        if (config.contains("seed")) {
            if (!config["seed"].is_number_unsigned()) throw ConfigError("config.seed: expected a non-negative integer");
            ctx.seed = config["seed"].get<std::uint64_t>();
        }
        if (seed_flag) ctx.seed = *seed_flag;

        if (sim->parsed()) return cmd_simulate(config, ctx);
        if (map->parsed()) return cmd_security_map(config, ctx);
        if (opt->parsed()) return cmd_optimize(config, ctx);
        if (fish->parsed()) return cmd_fisher(config, ctx);
        if (fig->parsed()) return cmd_figure(figure_id, config, ctx);
        return kExitConfig;
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace sqrs::cli
