#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "approval/election.hpp"
#include "approval/rational.hpp"

namespace approval {

enum class Rule { AV, GreedyCC, GreedyPAV, Phragmen };

// OWA weight functions of the Thiele rules.
enum class Owa { AV, CC, PAV };

std::string to_string(Rule rule);
Rule parse_rule(std::string_view name);

// λ(i) for i >= 1.
Rational owa_weight(Owa owa, std::int64_t i);

// Σ_v Σ_{t=1}^{|S ∩ A(v)|} λ(t), exact.
Rational lambda_score(const Election& e, std::span<const CandidateId> set, Owa owa);

Committee compute_av(const Election& e, int k, const TieOrder& order);

struct GreedyStep {
    CandidateId chosen = 0;
    Rational marginal;
    // Marginal scores of every non-member at the start of the iteration
    // (including the chosen one), by ascending candidate index.
    std::vector<std::pair<CandidateId, Rational>> scores;
};

struct GreedyTrace {
    std::vector<GreedyStep> steps;
};

struct GreedyResult {
    Committee committee;
    GreedyTrace trace;
};

// How marginal λ-scores are accumulated inside the greedy loop.
//  - Exact: Rational arithmetic throughout (reference).
//  - FixedPoint: integers scaled by lcm(1..k); exact whenever it fits in
//    128 bits, which `fixed_point_supported` decides up front.
//  - Auto: FixedPoint when supported, Exact otherwise.
enum class ScoreKernel { Auto, Exact, FixedPoint };

bool fixed_point_supported(std::span<const VoterGroup> groups, int k, Owa owa);

// Sequential Thiele: k rounds, each adding the non-member with the largest
// marginal λ-score, ties by `order`. `owa` must be CC or PAV (AV works too).
GreedyResult compute_greedy_thiele(const Election& e, int k, const TieOrder& order, Owa owa,
                                   ScoreKernel kernel = ScoreKernel::Auto);

struct Payment {
    std::size_t group = 0;
    std::int64_t weight = 0;
    Rational budget; // per voter, just before paying
};

struct PurchaseEvent {
    Rational time;
    CandidateId candidate = 0;
    std::vector<Payment> payers;
};

struct PhragmenTrace {
    std::vector<PurchaseEvent> events;
    std::vector<CandidateId> filled_by_tiebreak;
};

struct PhragmenResult {
    Committee committee;
    PhragmenTrace trace;
};

// Phragmén's sequential rule as an exact event-driven simulation.
PhragmenResult compute_phragmen(const Election& e, int k, const TieOrder& order);

// Committee of compute_phragmen without the trace, using integer arithmetic
// over a shared denominator. Used by compute_committee.
Committee compute_phragmen_committee(const Election& e, int k, const TieOrder& order);

// Winning committee under `rule`, without traces.
Committee compute_committee(Rule rule, const Election& e, int k, const TieOrder& order);
inline Committee compute_committee(Rule rule, const Election& e, int k) {
    return compute_committee(rule, e, k, e.tie_order());
}

// Exhaustive λ-Thiele optimum (testing oracle). Ties go to the committee
// whose members, listed by tie rank, are lexicographically best.
// Throws ResourceCapExceeded when C(m, k) > cap.
Committee brute_force_thiele(const Election& e, int k, const TieOrder& order, Owa owa,
                             std::uint64_t cap = 1'000'000);

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap);

namespace detail {

// Rule kernels over a raw group list. Callers guarantee the groups are valid
// for `m` candidates; used by the radius search to skip re-validation.
Committee run_rule(Rule rule, int m, std::span<const VoterGroup> groups, int k, const TieOrder& order);

} // namespace detail

} // namespace approval
