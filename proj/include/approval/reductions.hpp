#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "approval/election.hpp"
#include "approval/rational.hpp"
#include "approval/robustness.hpp"
#include "approval/rules.hpp"

namespace approval {

// Restricted exact cover by 3-sets: universe 0..3n-1, 3n sets of size 3,
// every element in exactly three sets.
struct Rx3cInstance {
    int n = 0;
    std::vector<std::array<int, 3>> sets;

    friend bool operator==(const Rx3cInstance&, const Rx3cInstance&) = default;
};

struct Rx3cValidation {
    bool valid = false;
    std::vector<std::string> violations;
};

Rx3cValidation validate_rx3c(const Rx3cInstance& inst);

// Lexicographically least exact cover (0-based set indices), if any.
// Throws ResourceCapExceeded when C(3n, n) > cap.
std::optional<std::vector<int>> exact_cover_oracle(const Rx3cInstance& inst, std::uint64_t cap = 1'000'000);

// "n <int>" then 3n lines "S<i>: a b c" (i from 1, elements 0-based).
Rx3cInstance parse_rx3c(std::string_view text);
std::string serialize_rx3c(const Rx3cInstance& inst);
Rx3cInstance read_rx3c_file(const std::string& path);

// Large-number parameters of a reduction. The default values are
// T = 10n^5, t = 10n^3 for GreedyCC/GreedyPAV and T = 900n^12, t = 30n^5
// for Phragmén.
struct ReductionConstants {
    std::int64_t big = 0;   // T
    std::int64_t small = 0; // t
};

ReductionConstants default_constants(Rule rule, int n);

struct ReductionInstance {
    Election election;
    Rule rule = Rule::GreedyCC;
    EditKind op = EditKind::Add;
    int n = 0;
    int k = 0;
    int budget = 0;
    ReductionConstants constants;
    bool scaled = false;
    CandidateId p = 0;
    CandidateId d = 0;
    // The unbribed rule already elects p, i.e. its own greedy pass found an
    // exact cover; the radius answer is then trivially yes.
    bool cover_found_unbribed = false;
    // Whether the sufficient ordering conditions checked at build time hold.
    bool preconditions_hold = false;
    std::vector<std::string> precondition_failures;
};

// Sufficient conditions on (T, t) for the construction to behave as the
// hardness argument needs, given the bribery budget. Empty when they hold.
std::vector<std::string> reduction_precondition_failures(Rule rule, int n, const ReductionConstants& c, int budget);

// Candidates: sets S_1..S_3n are 0..3n-1, then p = 3n, d = 3n+1.
// With `scaled` constants the preconditions are enforced (DomainError on
// violation); default constants are used verbatim and the verdict recorded.
ReductionInstance build_greedycc_reduction(const Rx3cInstance& inst, EditKind op,
                                           std::optional<ReductionConstants> scaled = std::nullopt);
ReductionInstance build_greedypav_reduction(const Rx3cInstance& inst, EditKind op,
                                            std::optional<ReductionConstants> scaled = std::nullopt);
ReductionInstance build_phragmen_reduction(const Rx3cInstance& inst, EditKind op,
                                           std::optional<ReductionConstants> scaled = std::nullopt);
ReductionInstance build_reduction(Rule rule, const Rx3cInstance& inst, EditKind op,
                                  std::optional<ReductionConstants> scaled = std::nullopt);

// key/value sidecar describing a reduction (k, budget, op, rule, T, t, ...).
std::string serialize_reduction_header(const ReductionInstance& red);
void write_reduction(const ReductionInstance& red, const std::string& dir);

// Exact time points of the Phragmén construction.
struct PhragmenTimeline {
    Rational A;    // 1/(T+3t^2): first set purchases
    Rational B_pd; // 1/(T+3t^2-2t): p/d voters alone can buy
    Rational B_p;  // 1/(T+3t^2-2t+t/(6n))
    Rational B_d;  // 1/(T+3t^2-2t+t/(3n))
    Rational C;    // A + A^2 t^2: earliest purchase of a set that lost money at A
    Rational D;    // 1/T: set voters alone can buy
    Rational X;    // money of d's supporters at B_p after an exact cover at A
    bool ordered = false;        // A < B_pd < C < D
    bool d_before_p = false;     // B_d < B_p
    bool x_below_one = false;    // X < 1
    bool ok() const { return ordered && d_before_p && x_below_one; }
};

PhragmenTimeline phragmen_timeline(const ReductionInstance& red);

struct ReductionCheck {
    bool cover_exists = false;
    std::optional<std::vector<int>> cover;
    bool radius_yes = false;
    bool trivially_yes = false; // cover_found_unbribed path
    RadiusAnswer answer;
    bool consistent = false;
};

// Builds the reduction for (rule, op), then compares the exhaustive radius
// answer at the reduction's budget with exact-cover existence.
ReductionCheck check_reduction_correctness(const Rx3cInstance& inst, Rule rule, EditKind op,
                                           std::optional<ReductionConstants> scaled = std::nullopt,
                                           const RadiusOptions& options = {});

} // namespace approval
