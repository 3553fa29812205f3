#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "approval/election.hpp"
#include "approval/rules.hpp"

namespace approval {

// Two elections one edit apart with known, disjoint winning committees.
struct WitnessPair {
    Election before;
    Election after;
    ApprovalEdit edit;
    int k = 0;
    Committee expected_before;
    Committee expected_after;
};

// Worst-case single-Add construction for the sequential rules: candidates
// a_1..a_k (indices 0..k-1) and b_1..b_k (k..2k-1), tie order ascending.
//   k-1 voters {a_1,b_1};  per i>=2: {a_1,b_i}, {a_i,b_1}, and 2k-3 x {a_i,b_i};
//   one empty voter v_0 (last group), who approves b_1 after the edit.
// Runs `rule` on both elections and throws if the committees are not
// {a_1..a_k} and {b_1..b_k}. Requires k >= 2.
WitnessPair build_replacement_witness(Rule rule, int k);

// Pair from an arbitrary election and applicable edit, oriented so the
// before -> after direction is an Add. Expected committees come from `rule`.
WitnessPair make_edit_pair(const Election& e, const ApprovalEdit& edit, Rule rule, int k);

// committee_difference(rule(e), rule(apply_edit(e, edit))) using e's tie order.
int measure_robustness(const Election& e, const ApprovalEdit& edit, Rule rule, int k);

// Add-direction difference equals Remove-direction difference on the pair.
bool verify_add_remove_symmetry(Rule rule, const WitnessPair& witness);

// Writes before.appel, after.appel and witness.txt into `dir`.
void write_witness(const WitnessPair& w, Rule rule, const std::string& dir);
std::string serialize_witness_header(const WitnessPair& w, Rule rule);

struct RadiusQuery {
    Election election;
    Rule rule = Rule::AV;
    int k = 1;
    EditKind op = EditKind::Add;
    int budget = 0;
};

enum class RadiusMode { Decide, Minimize };

struct RadiusAnswer {
    bool changed = false;
    // Replayable with apply_edit in order; present iff changed.
    std::vector<ApprovalEdit> witness_edits;
    // Least number of edits that flips the outcome (Minimize mode only).
    std::optional<int> minimal_radius;
    std::uint64_t evaluations = 0;
};

struct RadiusOptions {
    std::uint64_t cap = 10'000'000;
    unsigned workers = 1;
};

// Number of candidate edit sets (rule evaluations) a full search up to the
// budget would visit; saturates just above `limit`.
std::uint64_t estimate_radius_search(const RadiusQuery& q, std::uint64_t limit = UINT64_MAX - 1);

// Exact Robustness-Radius by iterative deepening over canonical edit sets.
//
// Voters inside one group are interchangeable, so an edit set is a multiset,
// per group, of per-voter edit patterns (nonempty sets of candidates to
// toggle), using at most `weight` voters of the group. Groups are visited by
// (approval-set size, index), patterns by (size, lexicographic). The first
// flipping set in that order at the smallest depth is returned, independent
// of the worker count. Throws ResourceCapExceeded when the estimate exceeds
// the cap.
RadiusAnswer solve_radius(const RadiusQuery& q, RadiusMode mode, const RadiusOptions& options = {});

} // namespace approval
