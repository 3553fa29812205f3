#include "approval/rules.hpp"

#include <algorithm>
#include <numeric>

#include "approval/errors.hpp"

namespace approval {

std::string to_string(Rule rule) {
    switch (rule) {
    case Rule::AV:
        return "av";
    case Rule::GreedyCC:
        return "greedycc";
    case Rule::GreedyPAV:
        return "greedypav";
    case Rule::Phragmen:
        return "phragmen";
    }
    return "?";
}

Rule parse_rule(std::string_view name) {
    if (name == "av") {
        return Rule::AV;
    }
    if (name == "greedycc") {
        return Rule::GreedyCC;
    }
    if (name == "greedypav") {
        return Rule::GreedyPAV;
    }
    if (name == "phragmen") {
        return Rule::Phragmen;
    }
    throw DomainError("unknown rule '" + std::string(name) + "' (expected av|greedycc|greedypav|phragmen)");
}

Rational owa_weight(Owa owa, std::int64_t i) {
    if (i < 1) {
        throw DomainError("OWA weight index must be >= 1");
    }
    switch (owa) {
    case Owa::AV:
        return Rational(1);
    case Owa::CC:
        return Rational(i == 1 ? 1 : 0);
    case Owa::PAV:
        return Rational(1, i);
    }
    return Rational();
}

Rational lambda_score(const Election& e, std::span<const CandidateId> set, Owa owa) {
    std::vector<bool> in_set(static_cast<std::size_t>(e.num_candidates()), false);
    for (auto c : set) {
        if (c < 0 || c >= e.num_candidates()) {
            throw DomainError("candidate index out of range");
        }
        in_set[static_cast<std::size_t>(c)] = true;
    }
    Rational total;
    for (const auto& g : e.groups()) {
        std::int64_t hits = 0;
        for (auto c : g.approvals) {
            hits += in_set[static_cast<std::size_t>(c)] ? 1 : 0;
        }
        Rational per_voter;
        for (std::int64_t t = 1; t <= hits; ++t) {
            per_voter += owa_weight(owa, t);
        }
        total += per_voter * Rational(g.weight);
    }
    return total;
}

namespace {

void check_k(int k, int m) {
    if (k < 0) {
        throw DomainError("committee size must be nonnegative");
    }
    if (k > m) {
        throw DomainError("k exceeds m");
    }
}

Committee av_kernel(int m, std::span<const VoterGroup> groups, int k, const TieOrder& order) {
    std::vector<std::int64_t> score(static_cast<std::size_t>(m), 0);
    for (const auto& g : groups) {
        for (auto c : g.approvals) {
            score[static_cast<std::size_t>(c)] += g.weight;
        }
    }
    std::vector<CandidateId> ranked(static_cast<std::size_t>(m));
    std::iota(ranked.begin(), ranked.end(), 0);
    std::partial_sort(ranked.begin(), ranked.begin() + k, ranked.end(), [&](CandidateId a, CandidateId b) {
        const auto sa = score[static_cast<std::size_t>(a)];
        const auto sb = score[static_cast<std::size_t>(b)];
        return sa != sb ? sa > sb : order.prefers(a, b);
    });
    ranked.resize(static_cast<std::size_t>(k));
    return Committee(std::move(ranked));
}

} // namespace

Committee compute_av(const Election& e, int k, const TieOrder& order) {
    check_k(k, e.num_candidates());
    if (order.size() != e.num_candidates()) {
        throw DomainError("tie order size differs from candidate count");
    }
    return av_kernel(e.num_candidates(), e.groups(), k, order);
}

Committee compute_committee(Rule rule, const Election& e, int k, const TieOrder& order) {
    check_k(k, e.num_candidates());
    if (order.size() != e.num_candidates()) {
        throw DomainError("tie order size differs from candidate count");
    }
    return detail::run_rule(rule, e.num_candidates(), e.groups(), k, order);
}

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > cap) {
            return cap + 1;
        }
    }
    return static_cast<std::uint64_t>(result);
}

namespace detail {

std::vector<CandidateId> greedy_selection(int m, std::span<const VoterGroup> groups, int k, const TieOrder& order,
                                          Owa owa, ScoreKernel kernel, GreedyTrace* trace);
std::vector<CandidateId> phragmen_integer_selection(int m, std::span<const VoterGroup> groups, int k,
                                                    const TieOrder& order);

Committee run_rule(Rule rule, int m, std::span<const VoterGroup> groups, int k, const TieOrder& order) {
    switch (rule) {
    case Rule::AV:
        return av_kernel(m, groups, k, order);
    case Rule::GreedyCC:
        return Committee(greedy_selection(m, groups, k, order, Owa::CC, ScoreKernel::Auto, nullptr));
    case Rule::GreedyPAV:
        return Committee(greedy_selection(m, groups, k, order, Owa::PAV, ScoreKernel::Auto, nullptr));
    case Rule::Phragmen:
        return Committee(phragmen_integer_selection(m, groups, k, order));
    }
    throw DomainError("unknown rule");
}

} // namespace detail

} // namespace approval
