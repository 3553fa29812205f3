#include "approval/errors.hpp"
#include "approval/rules.hpp"

namespace approval {

Committee brute_force_thiele(const Election& e, int k, const TieOrder& order, Owa owa, std::uint64_t cap) {
    const int m = e.num_candidates();
    if (k < 0 || k > m) {
        throw DomainError("k exceeds m");
    }
    const auto count = binomial_capped(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(k), cap);
    if (count > cap) {
        throw ResourceCapExceeded("brute-force committee enumeration too large", count, cap);
    }

    // Positions in the tie order, enumerated lexicographically; the first
    // committee reaching the maximum wins ties.
    std::vector<int> pos(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        pos[static_cast<std::size_t>(i)] = i;
    }
    std::vector<CandidateId> members(static_cast<std::size_t>(k));
    std::vector<CandidateId> best_members;
    Rational best_score;
    bool have_best = false;
    while (true) {
        for (int i = 0; i < k; ++i) {
            members[static_cast<std::size_t>(i)] = order.at(pos[static_cast<std::size_t>(i)]);
        }
        Rational score = lambda_score(e, members, owa);
        if (!have_best || score > best_score) {
            best_score = std::move(score);
            best_members = members;
            have_best = true;
        }
        int i = k - 1;
        while (i >= 0 && pos[static_cast<std::size_t>(i)] == m - k + i) {
            --i;
        }
        if (i < 0) {
            break;
        }
        ++pos[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) {
            pos[static_cast<std::size_t>(j)] = pos[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return Committee(std::move(best_members));
}

} // namespace approval
