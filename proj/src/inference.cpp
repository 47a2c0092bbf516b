#include "sqrs/inference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace sqrs {

namespace {

constexpr double kFactorFloor = 1e-300;

/// log((1 + cos θ_j)/2) per bin, floored; cached per thread and per bin count.
const std::vector<double> &log_cos_table(std::size_t k) {
    thread_local std::map<std::size_t, std::vector<double>> cache;
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    std::vector<double> t(k);
    for (std::size_t j = 0; j < k; ++j) {
        double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(k);
        t[j] = std::log(std::max(0.5 * (1.0 + std::cos(theta)), kFactorFloor));
    }
    return cache.emplace(k, std::move(t)).first->second;
}

LikelihoodGrid exp_normalize_log(std::vector<double> &logs) {
    double mx = *std::max_element(logs.begin(), logs.end());
    for (double &v : logs) v = std::exp(v - mx);
    LikelihoodGrid g(std::move(logs));
    return g;
}

}  // namespace

LikelihoodGrid likelihood_from_evidence(std::span<const PhaseMeasurement> measurements, std::size_t bins) {
    LikelihoodGrid probe(bins);  // validates the bin count
    std::array<std::size_t, 4> counts{};
    for (const auto &m : measurements) ++counts[m.effective_quarters()];

    const auto &table = log_cos_table(bins);
    const std::size_t quarter = bins / 4;
    std::vector<double> logs(bins, 0.0);
    for (int c = 0; c < 4; ++c) {
        if (counts[c] == 0) continue;
        const double n = static_cast<double>(counts[c]);
        const std::size_t shift = quarter * static_cast<std::size_t>(c);
        for (std::size_t j = 0; j < bins; ++j) logs[j] += n * table[(j + shift) % bins];
    }
    return exp_normalize_log(logs);
}

LikelihoodGrid rescale_sum_to_theta(const LikelihoodGrid &grid, int q) {
    if (q < 1) throw std::invalid_argument("rescale_sum_to_theta: q must be >= 1");
    if (grid.origin() != 0.0) throw std::invalid_argument("rescale_sum_to_theta: grid origin must be 0");
    if (q == 1) return grid;
    const std::size_t k = grid.size();
    std::vector<double> out(k);
    for (std::size_t j = 0; j < k; ++j) out[j] = grid[(static_cast<std::size_t>(q) * j) % k];
    return LikelihoodGrid(std::move(out));
}

double n_effective(std::span<const std::size_t> counts) {
    if (counts.empty()) throw std::invalid_argument("n_effective: empty count list");
    double inv = 0.0;
    for (std::size_t n : counts) {
        if (n == 0) return 0.0;
        inv += 1.0 / static_cast<double>(n);
    }
    return 1.0 / inv;
}

int smallest_theta_multiple(int m, int n_bobs) {
    if (m < 1 || m > n_bobs) throw std::invalid_argument("smallest_theta_multiple: m out of range");
    return m / std::gcd(m, n_bobs);
}

namespace {

struct KeyStat {
    CombinationKey key;
    std::size_t count;
};

/// Enumerates sets of `group_size` keys (drawn from `pool` indices) covering each Bob
/// exactly q times. `must_include`, if set, restricts to groups containing that index.
class GroupEnumerator {
  public:
    GroupEnumerator(const std::vector<KeyStat> &keys, std::vector<std::size_t> pool, int n_bobs, int q,
                    int group_size, std::size_t budget)
        : keys_(keys), pool_(std::move(pool)), n_bobs_(n_bobs), q_(q), group_size_(group_size), budget_(budget) {
        // suffix_[i][b]: how many pool keys at positions >= i contain Bob b.
        suffix_.assign(pool_.size() + 1, std::vector<int>(n_bobs_, 0));
        for (std::size_t i = pool_.size(); i-- > 0;) {
            suffix_[i] = suffix_[i + 1];
            for (int b = 0; b < n_bobs_; ++b)
                if (keys_[pool_[i]].key >> b & 1) ++suffix_[i][b];
        }
    }

    /// Returns false if the node budget or the result cap was exceeded.
    bool run(std::size_t cap, std::vector<std::vector<std::size_t>> &out) {
        cap_ = cap;
        out_ = &out;
        cover_.assign(n_bobs_, 0);
        chosen_.clear();
        nodes_ = 0;
        aborted_ = false;
        recurse(0);
        return !aborted_;
    }

  private:
    void recurse(std::size_t i) {
        if (aborted_) return;
        if (++nodes_ > budget_) {
            aborted_ = true;
            return;
        }
        if (static_cast<int>(chosen_.size()) == group_size_) {
            out_->push_back(chosen_);
            if (out_->size() > cap_) aborted_ = true;
            return;
        }
        const std::size_t need = static_cast<std::size_t>(group_size_) - chosen_.size();
        if (pool_.size() - i < need) return;
        for (int b = 0; b < n_bobs_; ++b)
            if (q_ - cover_[b] > suffix_[i][b]) return;

        const CombinationKey k = keys_[pool_[i]].key;
        bool fits = true;
        for (int b = 0; b < n_bobs_; ++b)
            if ((k >> b & 1) && cover_[b] >= q_) fits = false;
        if (fits) {
            for (int b = 0; b < n_bobs_; ++b)
                if (k >> b & 1) ++cover_[b];
            chosen_.push_back(pool_[i]);
            recurse(i + 1);
            chosen_.pop_back();
            for (int b = 0; b < n_bobs_; ++b)
                if (k >> b & 1) --cover_[b];
        }
        recurse(i + 1);
    }

    const std::vector<KeyStat> &keys_;
    std::vector<std::size_t> pool_;
    int n_bobs_, q_, group_size_;
    std::size_t budget_;
    std::vector<std::vector<int>> suffix_;
    std::vector<int> cover_;
    std::vector<std::size_t> chosen_;
    std::vector<std::vector<std::size_t>> *out_ = nullptr;
    std::size_t cap_ = 0, nodes_ = 0;
    bool aborted_ = false;
};

double group_neff(const std::vector<KeyStat> &keys, const std::vector<std::size_t> &members) {
    std::vector<std::size_t> counts;
    counts.reserve(members.size());
    for (std::size_t i : members) counts.push_back(keys[i].count);
    return n_effective(counts);
}

/// Branch-and-bound weighted set packing over candidate groups.
class Packer {
  public:
    Packer(const std::vector<std::vector<std::size_t>> &groups, std::vector<double> weights, std::size_t n_keys,
           std::size_t budget)
        : groups_(groups), weights_(std::move(weights)), used_(n_keys, 0), budget_(budget) {
        order_.resize(groups_.size());
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return weights_[a] > weights_[b]; });
        suffix_.assign(order_.size() + 1, 0.0);
        for (std::size_t i = order_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + weights_[order_[i]];
    }

    std::vector<std::size_t> run(bool &complete) {
        recurse(0, 0.0);
        complete = nodes_ <= budget_;
        return best_;
    }

  private:
    void recurse(std::size_t i, double value) {
        if (++nodes_ > budget_) return;
        if (value > best_value_) {
            best_value_ = value;
            best_ = current_;
        }
        if (i == order_.size() || value + suffix_[i] <= best_value_) return;
        const auto &g = groups_[order_[i]];
        bool free = std::all_of(g.begin(), g.end(), [&](std::size_t k) { return !used_[k]; });
        if (free) {
            for (std::size_t k : g) used_[k] = 1;
            current_.push_back(order_[i]);
            recurse(i + 1, value + weights_[order_[i]]);
            current_.pop_back();
            for (std::size_t k : g) used_[k] = 0;
        }
        recurse(i + 1, value);
    }

    const std::vector<std::vector<std::size_t>> &groups_;
    std::vector<double> weights_;
    std::vector<char> used_;
    std::size_t budget_, nodes_ = 0;
    std::vector<std::size_t> order_;
    std::vector<double> suffix_;
    std::vector<std::size_t> current_, best_;
    double best_value_ = 0.0;
};

CombinationGroup make_group(int m, int q, const std::vector<KeyStat> &keys, const std::vector<std::size_t> &members) {
    CombinationGroup g{m, q, {}, group_neff(keys, members)};
    for (std::size_t i : members) g.keys.push_back(keys[i].key);
    std::sort(g.keys.begin(), g.keys.end());
    return g;
}

}  // namespace

CombinationPlan plan_combinations(const EvidenceSet &evidence, int n_bobs, const PlanOptions &options) {
    if (n_bobs < 1) throw std::invalid_argument("plan_combinations: n_bobs must be positive");
    CombinationPlan plan;
    for (int m = 1; m <= n_bobs; ++m) {
        std::vector<KeyStat> keys;
        for (const auto &[k, v] : evidence.entries())
            if (key_size(k) == m && !v.empty()) keys.push_back({k, v.size()});
        if (keys.empty()) continue;
        std::stable_sort(keys.begin(), keys.end(), [](const KeyStat &a, const KeyStat &b) { return a.count > b.count; });

        const int q = smallest_theta_multiple(m, n_bobs);
        const int group_size = q * n_bobs / m;
        if (static_cast<int>(keys.size()) < group_size) continue;

        std::vector<std::size_t> all(keys.size());
        std::iota(all.begin(), all.end(), 0);
        std::vector<std::vector<std::size_t>> candidates;
        GroupEnumerator full(keys, all, n_bobs, q, group_size, options.node_budget);
        bool enumerated = full.run(options.exhaustive_group_limit, candidates);

        std::vector<std::vector<std::size_t>> chosen;
        if (enumerated) {
            std::vector<double> w;
            w.reserve(candidates.size());
            for (const auto &c : candidates) w.push_back(group_neff(keys, c));
            bool complete = true;
            Packer packer(candidates, w, keys.size(), options.node_budget);
            for (std::size_t gi : packer.run(complete)) chosen.push_back(candidates[gi]);
            if (!complete) plan.exhaustive = false;
        } else {
            // Greedy: admit combinations in order of decreasing data, and whenever the
            // pool admits a group through the newest member, keep the best such group.
            plan.exhaustive = false;
            std::vector<std::size_t> pool;
            for (std::size_t i = 0; i < keys.size(); ++i) {
                pool.push_back(i);
                std::vector<std::vector<std::size_t>> found;
                GroupEnumerator local(keys, pool, n_bobs, q, group_size, options.node_budget);
                local.run(options.exhaustive_group_limit, found);
                const std::vector<std::size_t> *best = nullptr;
                double best_w = -1.0;
                for (const auto &f : found) {
                    if (std::find(f.begin(), f.end(), i) == f.end()) continue;
                    double wv = group_neff(keys, f);
                    if (wv > best_w) {
                        best_w = wv;
                        best = &f;
                    }
                }
                if (!best) continue;
                chosen.push_back(*best);
                std::vector<std::size_t> rest;
                for (std::size_t p : pool)
                    if (std::find(best->begin(), best->end(), p) == best->end()) rest.push_back(p);
                pool = std::move(rest);
            }
        }
        for (const auto &c : chosen) plan.groups.push_back(make_group(m, q, keys, c));
    }
    return plan;
}

LikelihoodGrid theta_posterior(const EvidenceSet &evidence, int n_bobs, std::size_t bins) {
    CombinationPlan plan = plan_combinations(evidence, n_bobs);
    if (plan.groups.empty()) return LikelihoodGrid::uniform(bins);

    std::vector<double> logs(bins, 0.0);
    for (const auto &group : plan.groups) {
        std::vector<LikelihoodGrid> members;
        members.reserve(group.keys.size());
        for (CombinationKey k : group.keys) {
            LikelihoodGrid g = likelihood_from_evidence(evidence.entries().at(k), bins);
            members.push_back(std::move(g.normalize()));
        }
        LikelihoodGrid sum = circular_convolve(members);
        LikelihoodGrid pulled = rescale_sum_to_theta(sum, group.q);
        for (std::size_t j = 0; j < bins; ++j) logs[j] += std::log(std::max(pulled[j], kFactorFloor));
    }
    LikelihoodGrid post = exp_normalize_log(logs);
    return post.normalize();
}

double lambda_dispersion(const LikelihoodGrid &grid, double theta_true) {
    if (!grid.normalized() || std::abs(grid.mass() - 1.0) > 1e-9)
        throw std::invalid_argument("lambda_dispersion: grid must be normalized");
    double s = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) s += (1.0 - std::cos(grid.theta(j) - theta_true)) * grid[j];
    return std::clamp(s * grid.bin_width(), 0.0, 2.0);
}

double circular_mean(const LikelihoodGrid &grid) {
    double c = 0.0, s = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        c += std::cos(grid.theta(j)) * grid[j];
        s += std::sin(grid.theta(j)) * grid[j];
    }
    return canonical_angle(std::atan2(s, c));
}

double capital_lambda(std::span<const Execution> executions, int n_bobs, std::size_t bins) {
    if (executions.empty()) throw std::invalid_argument("capital_lambda: no executions");
    double total = 0.0;
    for (const auto &e : executions)
        total += lambda_dispersion(theta_posterior(e.evidence, n_bobs, bins), e.truth.theta().value());
    return total / static_cast<double>(executions.size());
}

}  // namespace sqrs
