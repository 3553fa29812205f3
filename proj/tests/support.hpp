#pragma once

// Generators and independent oracles shared by the test binaries. The
// oracles work on unit voters with raw mpq_class arithmetic and recompute
// everything from scratch, so they share no code path with the library
// kernels beyond the Election value type.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "approval/election.hpp"
#include "approval/rules.hpp"

namespace testing_support {

using approval::CandidateId;
using approval::Election;
using approval::TieOrder;
using approval::VoterGroup;

struct GenSpec {
    int min_m = 2;
    int max_m = 6;
    int max_groups = 6;
    int max_weight = 3;
    double approve_prob = 0.4;
    bool shuffle_order = true;
};

inline Election random_election(std::mt19937_64& rng, const GenSpec& spec = {}) {
    std::uniform_int_distribution<int> m_dist(spec.min_m, spec.max_m);
    const int m = m_dist(rng);
    std::uniform_int_distribution<int> g_dist(1, spec.max_groups);
    std::uniform_int_distribution<int> w_dist(1, spec.max_weight);
    std::bernoulli_distribution coin(spec.approve_prob);
    std::vector<VoterGroup> groups(static_cast<std::size_t>(g_dist(rng)));
    for (auto& g : groups) {
        g.weight = w_dist(rng);
        for (CandidateId c = 0; c < m; ++c) {
            if (coin(rng)) {
                g.approvals.push_back(c);
            }
        }
    }
    std::vector<CandidateId> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    if (spec.shuffle_order) {
        std::shuffle(order.begin(), order.end(), rng);
    }
    return Election(m, std::move(groups), TieOrder(order));
}

// Unit voters' approval sets, expanded by weight.
inline std::vector<std::vector<CandidateId>> unit_voters(const Election& e) {
    std::vector<std::vector<CandidateId>> out;
    for (const auto& g : e.groups()) {
        for (std::int64_t i = 0; i < g.weight; ++i) {
            out.push_back(g.approvals);
        }
    }
    return out;
}

inline bool approves(const std::vector<CandidateId>& a, CandidateId c) {
    return std::find(a.begin(), a.end(), c) != a.end();
}

// λ-score of a set from the definition: Σ_v Σ_{i=1}^{|S ∩ A(v)|} λ(i).
inline mpq_class naive_lambda_score(const Election& e, const std::vector<CandidateId>& set, approval::Owa owa) {
    mpq_class total = 0;
    for (const auto& v : unit_voters(e)) {
        int hits = 0;
        for (auto c : set) {
            hits += approves(v, c) ? 1 : 0;
        }
        for (int i = 1; i <= hits; ++i) {
            switch (owa) {
            case approval::Owa::AV:
                total += 1;
                break;
            case approval::Owa::CC:
                total += i == 1 ? 1 : 0;
                break;
            case approval::Owa::PAV:
                total += mpq_class(1, i);
                break;
            }
        }
    }
    return total;
}

// Greedy Thiele from score differences of whole sets.
inline std::vector<CandidateId> naive_greedy(const Election& e, int k, approval::Owa owa,
                                             std::vector<mpq_class>* marginals = nullptr) {
    const auto& order = e.tie_order();
    std::vector<CandidateId> w;
    for (int round = 0; round < k; ++round) {
        const mpq_class base = naive_lambda_score(e, w, owa);
        std::optional<CandidateId> best;
        mpq_class best_gain;
        for (int pos = 0; pos < e.num_candidates(); ++pos) {
            const CandidateId c = order.at(pos);
            if (std::find(w.begin(), w.end(), c) != w.end()) {
                continue;
            }
            auto with = w;
            with.push_back(c);
            const mpq_class gain = naive_lambda_score(e, with, owa) - base;
            if (!best || gain > best_gain) {
                best = c;
                best_gain = gain;
            }
        }
        w.push_back(*best);
        if (marginals) {
            marginals->push_back(best_gain);
        }
    }
    return w;
}

// Sequential Phragmén in its load formulation over unit voters: the next
// candidate minimizes (1 + Σ_{v ∋ c} load_v) / |N_c|, and its supporters'
// loads become that value.
inline std::vector<CandidateId> naive_phragmen(const Election& e, int k, std::vector<mpq_class>* times = nullptr) {
    const auto voters = unit_voters(e);
    const auto& order = e.tie_order();
    std::vector<mpq_class> load(voters.size(), 0);
    std::vector<CandidateId> w;
    while (static_cast<int>(w.size()) < k) {
        std::optional<CandidateId> best;
        mpq_class best_time;
        for (int pos = 0; pos < e.num_candidates(); ++pos) {
            const CandidateId c = order.at(pos);
            if (std::find(w.begin(), w.end(), c) != w.end()) {
                continue;
            }
            mpq_class sum = 1;
            int supporters = 0;
            for (std::size_t v = 0; v < voters.size(); ++v) {
                if (approves(voters[v], c)) {
                    sum += load[v];
                    ++supporters;
                }
            }
            if (supporters == 0) {
                continue;
            }
            const mpq_class t = sum / supporters;
            if (!best || t < best_time) {
                best = c;
                best_time = t;
            }
        }
        if (!best) {
            break;
        }
        for (std::size_t v = 0; v < voters.size(); ++v) {
            if (approves(voters[v], *best)) {
                load[v] = best_time;
            }
        }
        w.push_back(*best);
        if (times) {
            times->push_back(best_time);
        }
    }
    for (int pos = 0; pos < e.num_candidates() && static_cast<int>(w.size()) < k; ++pos) {
        const CandidateId c = order.at(pos);
        if (std::find(w.begin(), w.end(), c) == w.end()) {
            w.push_back(c);
        }
    }
    return w;
}

inline std::vector<CandidateId> naive_av(const Election& e, int k) {
    std::vector<std::int64_t> score(static_cast<std::size_t>(e.num_candidates()), 0);
    for (const auto& v : unit_voters(e)) {
        for (auto c : v) {
            ++score[static_cast<std::size_t>(c)];
        }
    }
    auto cands = e.tie_order().order();
    std::stable_sort(cands.begin(), cands.end(), [&](CandidateId a, CandidateId b) {
        return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)];
    });
    cands.resize(static_cast<std::size_t>(k));
    return cands;
}

inline approval::Committee naive_rule(approval::Rule rule, const Election& e, int k) {
    switch (rule) {
    case approval::Rule::AV:
        return approval::Committee(naive_av(e, k));
    case approval::Rule::GreedyCC:
        return approval::Committee(naive_greedy(e, k, approval::Owa::CC));
    case approval::Rule::GreedyPAV:
        return approval::Committee(naive_greedy(e, k, approval::Owa::PAV));
    case approval::Rule::Phragmen:
        return approval::Committee(naive_phragmen(e, k));
    }
    return {};
}

// Least number of edits (distinct unit-voter slots) that changes the rule's
// committee, or nullopt if none up to `budget`. Plain subset enumeration.
inline std::optional<int> naive_min_radius(const Election& e, approval::Rule rule, int k, approval::EditKind op,
                                           int budget) {
    const auto voters = unit_voters(e);
    std::vector<std::pair<std::size_t, CandidateId>> slots;
    for (std::size_t v = 0; v < voters.size(); ++v) {
        for (CandidateId c = 0; c < e.num_candidates(); ++c) {
            if (approves(voters[v], c) == (op == approval::EditKind::Remove)) {
                slots.emplace_back(v, c);
            }
        }
    }
    const auto base = naive_rule(rule, e, k);
    for (int b = 1; b <= budget && b <= static_cast<int>(slots.size()); ++b) {
        std::vector<std::size_t> pick(static_cast<std::size_t>(b));
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            auto edited = voters;
            for (auto i : pick) {
                auto& a = edited[slots[i].first];
                const CandidateId c = slots[i].second;
                if (op == approval::EditKind::Add) {
                    a.push_back(c);
                } else {
                    a.erase(std::find(a.begin(), a.end(), c));
                }
            }
            std::vector<VoterGroup> groups;
            for (auto& a : edited) {
                groups.push_back({1, a});
            }
            if (!(naive_rule(rule, Election(e.num_candidates(), groups, e.tie_order()), k) == base)) {
                return b;
            }
            int i = b - 1;
            while (i >= 0 && pick[static_cast<std::size_t>(i)] == slots.size() - static_cast<std::size_t>(b - i)) {
                --i;
            }
            if (i < 0) {
                break;
            }
            ++pick[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < b; ++j) {
                pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
            }
        }
    }
    return std::nullopt;
}

} // namespace testing_support
