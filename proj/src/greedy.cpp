#include <numeric>

#include "approval/errors.hpp"
#include "approval/rules.hpp"

namespace approval {

namespace {

using i128 = __int128;

constexpr std::int64_t fixed_point_denominator_limit = std::int64_t(1) << 62;

// lcm(1..k), or 0 when it exceeds the fixed-point limit.
std::int64_t harmonic_denominator(int k) {
    std::int64_t l = 1;
    for (std::int64_t i = 2; i <= k; ++i) {
        const std::int64_t g = std::gcd(l, i);
        if (l / g > fixed_point_denominator_limit / i) {
            return 0;
        }
        l = l / g * i;
    }
    return l;
}

std::int64_t fixed_point_scale(Owa owa, int k) { return owa == Owa::PAV ? harmonic_denominator(k) : 1; }

// Scaled λ(level + 1) for a voter with `level` committee members already.
std::int64_t scaled_weight(Owa owa, std::int64_t scale, int level) {
    switch (owa) {
    case Owa::AV:
        return 1;
    case Owa::CC:
        return level == 0 ? 1 : 0;
    case Owa::PAV:
        return scale / (level + 1);
    }
    return 0;
}

bool better(bool have_best, int cmp_to_best, CandidateId c, CandidateId best, const TieOrder& order) {
    if (!have_best) {
        return true;
    }
    return cmp_to_best > 0 || (cmp_to_best == 0 && order.prefers(c, best));
}

void check_inputs(int m, int k, const TieOrder& order) {
    if (k < 0) {
        throw DomainError("committee size must be nonnegative");
    }
    if (k > m) {
        throw DomainError("k exceeds m");
    }
    if (order.size() != m) {
        throw DomainError("tie order size differs from candidate count");
    }
}

std::vector<CandidateId> greedy_fixed_point(int m, std::span<const VoterGroup> groups, int k,
                                            const TieOrder& order, Owa owa, GreedyTrace* trace) {
    const std::int64_t scale = fixed_point_scale(owa, k);
    std::vector<int> level(groups.size(), 0);
    std::vector<bool> chosen(static_cast<std::size_t>(m), false);
    std::vector<i128> marginal(static_cast<std::size_t>(m));
    std::vector<CandidateId> picks;
    picks.reserve(static_cast<std::size_t>(k));

    for (int round = 0; round < k; ++round) {
        std::fill(marginal.begin(), marginal.end(), 0);
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            const auto w = scaled_weight(owa, scale, level[gi]);
            if (w == 0) {
                continue;
            }
            const i128 add = i128(groups[gi].weight) * w;
            for (auto c : groups[gi].approvals) {
                marginal[static_cast<std::size_t>(c)] += add;
            }
        }
        CandidateId best = -1;
        for (CandidateId c = 0; c < m; ++c) {
            if (chosen[static_cast<std::size_t>(c)]) {
                continue;
            }
            const i128 mc = marginal[static_cast<std::size_t>(c)];
            const int cmp = best < 0 ? 0 : (mc > marginal[static_cast<std::size_t>(best)]) - (mc < marginal[static_cast<std::size_t>(best)]);
            if (better(best >= 0, cmp, c, best, order)) {
                best = c;
            }
        }
        if (trace) {
            GreedyStep step;
            step.chosen = best;
            step.marginal = Rational::fraction(marginal[static_cast<std::size_t>(best)], scale);
            for (CandidateId c = 0; c < m; ++c) {
                if (!chosen[static_cast<std::size_t>(c)]) {
                    step.scores.emplace_back(c, Rational::fraction(marginal[static_cast<std::size_t>(c)], scale));
                }
            }
            trace->steps.push_back(std::move(step));
        }
        chosen[static_cast<std::size_t>(best)] = true;
        picks.push_back(best);
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            if (groups[gi].approves(best)) {
                ++level[gi];
            }
        }
    }
    return picks;
}

std::vector<CandidateId> greedy_exact(int m, std::span<const VoterGroup> groups, int k, const TieOrder& order,
                                      Owa owa, GreedyTrace* trace) {
    std::vector<int> level(groups.size(), 0);
    std::vector<bool> chosen(static_cast<std::size_t>(m), false);
    std::vector<CandidateId> picks;
    picks.reserve(static_cast<std::size_t>(k));
    const auto mm = static_cast<std::size_t>(m);

    for (int round = 0; round < k; ++round) {
        // weight of approving voters per (candidate, current level)
        const auto levels = static_cast<std::size_t>(round + 1);
        std::vector<i128> counts(mm * levels, 0);
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            const auto lv = static_cast<std::size_t>(level[gi]);
            for (auto c : groups[gi].approvals) {
                counts[static_cast<std::size_t>(c) * levels + lv] += groups[gi].weight;
            }
        }
        std::vector<Rational> marginal(mm);
        for (std::size_t c = 0; c < mm; ++c) {
            if (chosen[c]) {
                continue;
            }
            Rational sum;
            for (std::size_t lv = 0; lv < levels; ++lv) {
                const i128 cnt = counts[c * levels + lv];
                if (cnt != 0) {
                    sum += Rational::fraction(cnt, 1) * owa_weight(owa, static_cast<std::int64_t>(lv) + 1);
                }
            }
            marginal[c] = std::move(sum);
        }
        CandidateId best = -1;
        for (CandidateId c = 0; c < m; ++c) {
            if (chosen[static_cast<std::size_t>(c)]) {
                continue;
            }
            const auto ord = best < 0 ? std::strong_ordering::equal
                                      : marginal[static_cast<std::size_t>(c)] <=> marginal[static_cast<std::size_t>(best)];
            const int cmp = ord < 0 ? -1 : (ord > 0 ? 1 : 0);
            if (better(best >= 0, cmp, c, best, order)) {
                best = c;
            }
        }
        if (trace) {
            GreedyStep step;
            step.chosen = best;
            step.marginal = marginal[static_cast<std::size_t>(best)];
            for (CandidateId c = 0; c < m; ++c) {
                if (!chosen[static_cast<std::size_t>(c)]) {
                    step.scores.emplace_back(c, marginal[static_cast<std::size_t>(c)]);
                }
            }
            trace->steps.push_back(std::move(step));
        }
        chosen[static_cast<std::size_t>(best)] = true;
        picks.push_back(best);
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            if (groups[gi].approves(best)) {
                ++level[gi];
            }
        }
    }
    return picks;
}

} // namespace

bool fixed_point_supported(std::span<const VoterGroup> groups, int k, Owa owa) {
    const std::int64_t scale = fixed_point_scale(owa, k);
    if (scale == 0) {
        return false;
    }
    // Marginals are bounded by (total weight) * scale; keep them below 2^125.
    i128 total = 0;
    for (const auto& g : groups) {
        total += g.weight;
        if (total > (i128(1) << 63)) {
            return false;
        }
    }
    return true;
}

namespace detail {

std::vector<CandidateId> greedy_selection(int m, std::span<const VoterGroup> groups, int k, const TieOrder& order,
                                          Owa owa, ScoreKernel kernel, GreedyTrace* trace) {
    check_inputs(m, k, order);
    if (kernel == ScoreKernel::Auto) {
        kernel = fixed_point_supported(groups, k, owa) ? ScoreKernel::FixedPoint : ScoreKernel::Exact;
    }
    if (kernel == ScoreKernel::FixedPoint) {
        if (!fixed_point_supported(groups, k, owa)) {
            throw DomainError("fixed-point kernel cannot represent this instance exactly");
        }
        return greedy_fixed_point(m, groups, k, order, owa, trace);
    }
    return greedy_exact(m, groups, k, order, owa, trace);
}

} // namespace detail

GreedyResult compute_greedy_thiele(const Election& e, int k, const TieOrder& order, Owa owa, ScoreKernel kernel) {
    GreedyResult result;
    auto picks = detail::greedy_selection(e.num_candidates(), e.groups(), k, order, owa, kernel, &result.trace);
    result.committee = Committee(std::move(picks));
    return result;
}

} // namespace approval
