#include <gmpxx.h>

#include "approval/errors.hpp"
#include "approval/rules.hpp"

namespace approval {

// Event-driven simulation. Voters in a group share one reset time r_g; a
// candidate c with support s_c and R_c = Σ_{g∋c} w_g r_g can be bought at
// t_c = (1 + R_c) / s_c. Pools never exceed 1 between events, so t_c is never
// in the past and repeatedly taking the earliest t_c (ties by order) replays
// the continuous process. After each purchase every t_c is re-evaluated.

namespace detail {

std::vector<CandidateId> phragmen_selection(int m, std::span<const VoterGroup> groups, int k,
                                            const TieOrder& order, PhragmenTrace* trace) {
    if (k < 0) {
        throw DomainError("committee size must be nonnegative");
    }
    if (k > m) {
        throw DomainError("k exceeds m");
    }
    if (order.size() != m) {
        throw DomainError("tie order size differs from candidate count");
    }
    const auto mm = static_cast<std::size_t>(m);
    std::vector<std::int64_t> support(mm, 0);
    for (const auto& g : groups) {
        for (auto c : g.approvals) {
            support[static_cast<std::size_t>(c)] += g.weight;
        }
    }
    // need[c] = 1 + R_c
    std::vector<Rational> need(mm, Rational(1));
    std::vector<Rational> reset(groups.size());
    std::vector<bool> chosen(mm, false);
    std::vector<CandidateId> picks;
    picks.reserve(static_cast<std::size_t>(k));

    while (static_cast<int>(picks.size()) < k) {
        CandidateId best = -1;
        for (CandidateId c = 0; c < m; ++c) {
            const auto ci = static_cast<std::size_t>(c);
            if (chosen[ci] || support[ci] == 0) {
                continue;
            }
            if (best < 0) {
                best = c;
                continue;
            }
            const auto bi = static_cast<std::size_t>(best);
            // need_c / s_c  vs  need_b / s_b
            const auto ord = need[ci] * Rational(support[bi]) <=> need[bi] * Rational(support[ci]);
            if (ord < 0 || (ord == 0 && order.prefers(c, best))) {
                best = c;
            }
        }
        if (best < 0) {
            break;
        }
        const auto bi = static_cast<std::size_t>(best);
        const Rational time = need[bi] / Rational(support[bi]);

        PurchaseEvent event;
        if (trace) {
            event.time = time;
            event.candidate = best;
        }
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            const auto& g = groups[gi];
            if (!g.approves(best)) {
                continue;
            }
            const Rational budget = time - reset[gi];
            if (trace) {
                event.payers.push_back({gi, g.weight, budget});
            }
            if (budget.sign() != 0) {
                const Rational spent = budget * Rational(g.weight);
                for (auto c : g.approvals) {
                    need[static_cast<std::size_t>(c)] += spent;
                }
            }
            reset[gi] = time;
        }
        chosen[bi] = true;
        picks.push_back(best);
        if (trace) {
            trace->events.push_back(std::move(event));
        }
    }

    for (int pos = 0; pos < m && static_cast<int>(picks.size()) < k; ++pos) {
        const CandidateId c = order.at(pos);
        if (!chosen[static_cast<std::size_t>(c)]) {
            chosen[static_cast<std::size_t>(c)] = true;
            picks.push_back(c);
            if (trace) {
                trace->filled_by_tiebreak.push_back(c);
            }
        }
    }
    return picks;
}

// Same process without traces. Every time is kept as N / Q, where Q is the
// product of the supports of the candidates bought so far, so all quantities
// are integers and no gcd is ever taken. need_c = X_c / Q.
std::vector<CandidateId> phragmen_integer_selection(int m, std::span<const VoterGroup> groups, int k,
                                                    const TieOrder& order) {
    if (k < 0) {
        throw DomainError("committee size must be nonnegative");
    }
    if (k > m) {
        throw DomainError("k exceeds m");
    }
    if (order.size() != m) {
        throw DomainError("tie order size differs from candidate count");
    }
    const auto mm = static_cast<std::size_t>(m);
    std::vector<std::int64_t> support(mm, 0);
    for (const auto& g : groups) {
        for (auto c : g.approvals) {
            support[static_cast<std::size_t>(c)] += g.weight;
        }
    }
    // Scratch reused across calls; the radius search calls this in a tight loop.
    thread_local std::vector<mpz_class> need;
    thread_local std::vector<mpz_class> times;
    thread_local std::vector<int> reset;
    thread_local mpz_class lhs;
    thread_local mpz_class rhs;
    thread_local mpz_class paid;
    need.resize(mm);
    for (auto& x : need) {
        x = 1;
    }
    times.clear();
    reset.assign(groups.size(), -1);
    std::vector<bool> chosen(mm, false);
    std::vector<CandidateId> picks;
    picks.reserve(static_cast<std::size_t>(k));

    auto to_mpz = [](std::int64_t v) {
        mpz_class z;
        mpz_set_si(z.get_mpz_t(), static_cast<long>(v));
        return z;
    };

    while (static_cast<int>(picks.size()) < k) {
        CandidateId best = -1;
        for (CandidateId c = 0; c < m; ++c) {
            const auto ci = static_cast<std::size_t>(c);
            if (chosen[ci] || support[ci] == 0) {
                continue;
            }
            if (best < 0) {
                best = c;
                continue;
            }
            const auto bi = static_cast<std::size_t>(best);
            mpz_mul_si(lhs.get_mpz_t(), need[ci].get_mpz_t(), static_cast<long>(support[bi]));
            mpz_mul_si(rhs.get_mpz_t(), need[bi].get_mpz_t(), static_cast<long>(support[ci]));
            const int ord = mpz_cmp(lhs.get_mpz_t(), rhs.get_mpz_t());
            if (ord < 0 || (ord == 0 && order.prefers(c, best))) {
                best = c;
            }
        }
        if (best < 0) {
            break;
        }
        const auto bi = static_cast<std::size_t>(best);
        // t = X_b / (Q s_b); move everything to the denominator Q' = Q s_b.
        const mpz_class scale = to_mpz(support[bi]);
        mpz_class now = need[bi];
        for (auto& x : need) {
            x *= scale;
        }
        for (auto& t : times) {
            t *= scale;
        }
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            const auto& g = groups[gi];
            if (!g.approves(best)) {
                continue;
            }
            if (reset[gi] < 0) {
                paid = now;
            } else {
                paid = now - times[static_cast<std::size_t>(reset[gi])];
            }
            if (sgn(paid) != 0) {
                mpz_mul_si(paid.get_mpz_t(), paid.get_mpz_t(), static_cast<long>(g.weight));
                for (auto c : g.approvals) {
                    need[static_cast<std::size_t>(c)] += paid;
                }
            }
            reset[gi] = static_cast<int>(times.size());
        }
        times.push_back(std::move(now));
        chosen[bi] = true;
        picks.push_back(best);
    }

    for (int pos = 0; pos < m && static_cast<int>(picks.size()) < k; ++pos) {
        const CandidateId c = order.at(pos);
        if (!chosen[static_cast<std::size_t>(c)]) {
            chosen[static_cast<std::size_t>(c)] = true;
            picks.push_back(c);
        }
    }
    return picks;
}

} // namespace detail

PhragmenResult compute_phragmen(const Election& e, int k, const TieOrder& order) {
    PhragmenResult result;
    auto picks = detail::phragmen_selection(e.num_candidates(), e.groups(), k, order, &result.trace);
    result.committee = Committee(std::move(picks));
    return result;
}

Committee compute_phragmen_committee(const Election& e, int k, const TieOrder& order) {
    return Committee(detail::phragmen_integer_selection(e.num_candidates(), e.groups(), k, order));
}

} // namespace approval
