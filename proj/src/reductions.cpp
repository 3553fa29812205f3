#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "approval/errors.hpp"
#include "approval/reductions.hpp"

namespace approval {

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    while (exp-- > 0) {
        r *= base;
    }
    return r;
}

void require_valid(const Rx3cInstance& inst) {
    const auto check = validate_rx3c(inst);
    if (!check.valid) {
        throw DomainError("invalid RX3C instance: " + check.violations.front());
    }
}

int budget_for(int n, EditKind op) { return op == EditKind::Add ? n : 2 * n; }

// Sets containing each universe element, ascending.
std::vector<std::vector<CandidateId>> sets_containing(const Rx3cInstance& inst) {
    std::vector<std::vector<CandidateId>> out(static_cast<std::size_t>(3 * inst.n));
    for (std::size_t i = 0; i < inst.sets.size(); ++i) {
        for (int u : inst.sets[i]) {
            out[static_cast<std::size_t>(u)].push_back(static_cast<CandidateId>(i));
        }
    }
    return out;
}

// The n empty voters (Add) or one voter per set candidate (Remove).
void append_bribery_voters(std::vector<VoterGroup>& groups, int n, EditKind op) {
    if (op == EditKind::Add) {
        groups.push_back({n, {}});
        return;
    }
    for (int i = 0; i < 3 * n; ++i) {
        groups.push_back({1, {i}});
    }
}

ReductionConstants resolve_constants(Rule rule, const Rx3cInstance& inst, EditKind op,
                                     const std::optional<ReductionConstants>& scaled) {
    if (!scaled) {
        if (rule != Rule::Phragmen && inst.n < 2) {
            throw DomainError("default constants degenerate at n = 1 (T = t); use scaled constants");
        }
        return default_constants(rule, inst.n);
    }
    const auto failures = reduction_precondition_failures(rule, inst.n, *scaled, budget_for(inst.n, op));
    if (!failures.empty()) {
        throw DomainError("scaled constants rejected: " + failures.front());
    }
    return *scaled;
}

ReductionInstance finish(Rule rule, const Rx3cInstance& inst, EditKind op, ReductionConstants c, bool scaled,
                         std::vector<VoterGroup> groups, TieOrder order) {
    const int n = inst.n;
    ReductionInstance red{Election(3 * n + 2, std::move(groups), std::move(order)),
                          rule,
                          op,
                          n,
                          3 * n + 1,
                          budget_for(n, op),
                          c,
                          scaled,
                          3 * n,
                          3 * n + 1,
                          false,
                          false,
                          {}};
    red.precondition_failures = reduction_precondition_failures(rule, n, c, red.budget);
    red.preconditions_hold = red.precondition_failures.empty();
    red.cover_found_unbribed = compute_committee(rule, red.election, red.k).contains(red.p);
    return red;
}

// Shared part of the two greedy constructions: set singletons and pairs.
std::vector<VoterGroup> set_voters(int n, std::int64_t T) {
    std::vector<VoterGroup> groups;
    for (int i = 0; i < 3 * n; ++i) {
        groups.push_back({T, {i}});
    }
    for (int i = 0; i < 3 * n; ++i) {
        for (int j = i + 1; j < 3 * n; ++j) {
            groups.push_back({T, {i, j}});
        }
    }
    return groups;
}

} // namespace

ReductionConstants default_constants(Rule rule, int n) {
    if (n < 1) {
        throw DomainError("n must be positive");
    }
    switch (rule) {
    case Rule::GreedyCC:
    case Rule::GreedyPAV:
        return {10 * ipow(n, 5), 10 * ipow(n, 3)};
    case Rule::Phragmen:
        return {900 * ipow(n, 12), 30 * ipow(n, 5)};
    case Rule::AV:
        break;
    }
    throw DomainError("no reduction for AV");
}

std::vector<std::string> reduction_precondition_failures(Rule rule, int n, const ReductionConstants& c, int budget) {
    std::vector<std::string> out;
    const std::int64_t T = c.big;
    const std::int64_t t = c.small;
    const std::int64_t b = budget;
    if (T <= 0 || t <= 0) {
        out.push_back("T and t must be positive");
        return out;
    }
    auto need = [&out](bool ok, const char* what) {
        if (!ok) {
            out.emplace_back(what);
        }
    };
    switch (rule) {
    case Rule::GreedyCC:
        need(T > 7 * n * t + 2 * b, "T > 7nt + 2B");
        need(t > 2 * b, "t > 2B");
        break;
    case Rule::GreedyPAV:
        need(T > 14 * n * t + 4 * b, "T > 14nt + 4B");
        need(t > 6 * b, "t > 6B");
        need((n * T) % 2 == 0, "nT even");
        need((n * t) % 2 == 0, "nt even");
        break;
    case Rule::Phragmen: {
        const std::int64_t M = T + 3 * t * t;
        need(t % (6 * n) == 0, "t divisible by 6n");
        need(t > 6 * n, "t > 6n");
        need(t * t - 2 * t > 2 * t, "t^2 - 2t > 2t");
        need(M > 2 * t * t, "T + 3t^2 > 2t^2");
        need(T > 3 * t * t, "T > 3t^2");
        need(t / (6 * n) > b, "t/(6n) > B");
        break;
    }
    case Rule::AV:
        out.emplace_back("no reduction for AV");
        break;
    }
    return out;
}

ReductionInstance build_greedycc_reduction(const Rx3cInstance& inst, EditKind op,
                                           std::optional<ReductionConstants> scaled) {
    require_valid(inst);
    const auto c = resolve_constants(Rule::GreedyCC, inst, op, scaled);
    const int n = inst.n;
    const CandidateId p = 3 * n;
    const CandidateId d = 3 * n + 1;
    auto groups = set_voters(n, c.big);
    groups.push_back({2 * n * c.big + 4 * n * c.small, {p, d}});
    for (auto sets : sets_containing(inst)) {
        sets.push_back(d);
        groups.push_back({c.small, std::move(sets)});
    }
    append_bribery_voters(groups, n, op);
    return finish(Rule::GreedyCC, inst, op, c, scaled.has_value(), std::move(groups), TieOrder::ascending(3 * n + 2));
}

ReductionInstance build_greedypav_reduction(const Rx3cInstance& inst, EditKind op,
                                            std::optional<ReductionConstants> scaled) {
    require_valid(inst);
    const auto c = resolve_constants(Rule::GreedyPAV, inst, op, scaled);
    const int n = inst.n;
    const CandidateId p = 3 * n;
    const CandidateId d = 3 * n + 1;
    if ((n * c.big) % 2 != 0 || (n * c.small) % 2 != 0) {
        throw DomainError("0.5nT and 1.5nt must be integers");
    }
    auto groups = set_voters(n, c.big);
    groups.push_back({2 * n * c.big + n * c.big / 2 + 4 * n * c.small, {p, d}});
    for (auto sets : sets_containing(inst)) {
        sets.push_back(d);
        groups.push_back({c.small, std::move(sets)});
    }
    groups.push_back({3 * n * c.small / 2, {p}});
    append_bribery_voters(groups, n, op);
    return finish(Rule::GreedyPAV, inst, op, c, scaled.has_value(), std::move(groups),
                  TieOrder::ascending(3 * n + 2));
}

ReductionInstance build_phragmen_reduction(const Rx3cInstance& inst, EditKind op,
                                           std::optional<ReductionConstants> scaled) {
    require_valid(inst);
    const auto c = resolve_constants(Rule::Phragmen, inst, op, scaled);
    const int n = inst.n;
    const std::int64_t T = c.big;
    const std::int64_t t = c.small;
    if (t % (6 * n) != 0) {
        throw DomainError("t must be divisible by 6n");
    }
    const CandidateId p = 3 * n;
    const CandidateId d = 3 * n + 1;
    const std::int64_t d_universe = t / (3 * n);
    if (t * t <= d_universe || T + 3 * t * t - 2 * t < 1) {
        throw DomainError("constants too small for the construction");
    }

    std::vector<VoterGroup> groups;
    for (int i = 0; i < 3 * n; ++i) {
        groups.push_back({T, {i}});
    }
    for (auto sets : sets_containing(inst)) {
        groups.push_back({t * t - d_universe, sets});
        sets.push_back(d);
        groups.push_back({d_universe, std::move(sets)});
    }
    groups.push_back({T + 3 * t * t - 2 * t, {p, d}});
    groups.push_back({t / (6 * n), {p}});
    append_bribery_voters(groups, n, op);

    std::vector<CandidateId> order(static_cast<std::size_t>(3 * n));
    std::iota(order.begin(), order.end(), 0);
    order.push_back(d);
    order.push_back(p);
    return finish(Rule::Phragmen, inst, op, c, scaled.has_value(), std::move(groups), TieOrder(std::move(order)));
}

ReductionInstance build_reduction(Rule rule, const Rx3cInstance& inst, EditKind op,
                                  std::optional<ReductionConstants> scaled) {
    switch (rule) {
    case Rule::GreedyCC:
        return build_greedycc_reduction(inst, op, scaled);
    case Rule::GreedyPAV:
        return build_greedypav_reduction(inst, op, scaled);
    case Rule::Phragmen:
        return build_phragmen_reduction(inst, op, scaled);
    case Rule::AV:
        break;
    }
    throw DomainError("no reduction for AV");
}

std::string serialize_reduction_header(const ReductionInstance& red) {
    std::ostringstream out;
    out << "rule " << to_string(red.rule) << '\n';
    out << "op " << to_string(red.op) << '\n';
    out << "n " << red.n << '\n';
    out << "k " << red.k << '\n';
    out << "budget " << red.budget << '\n';
    out << "T " << red.constants.big << '\n';
    out << "t " << red.constants.small << '\n';
    out << "constants " << (red.scaled ? "scaled" : "default") << '\n';
    out << "candidate_map";
    for (int i = 0; i < 3 * red.n; ++i) {
        out << " S" << i + 1 << '=' << i;
    }
    out << " p=" << red.p << " d=" << red.d << '\n';
    out << "cover_found_unbribed " << (red.cover_found_unbribed ? "true" : "false") << '\n';
    out << "preconditions " << (red.preconditions_hold ? "hold" : "violated");
    for (const auto& f : red.precondition_failures) {
        out << " [" << f << ']';
    }
    out << '\n';
    return out.str();
}

void write_reduction(const ReductionInstance& red, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    write_election_file(red.election, (base / "election.appel").string());
    std::ofstream out(base / "reduction.txt", std::ios::binary);
    if (!out) {
        throw DomainError("cannot write reduction header in " + dir);
    }
    out << serialize_reduction_header(red);
}

PhragmenTimeline phragmen_timeline(const ReductionInstance& red) {
    if (red.rule != Rule::Phragmen) {
        throw DomainError("timeline is defined for Phragmen reductions only");
    }
    const Rational T(red.constants.big);
    const Rational t(red.constants.small);
    const Rational n(red.n);
    const Rational one(1);
    const Rational M = T + Rational(3) * t * t;
    const Rational pd = M - Rational(2) * t;
    const Rational p_extra = t / (Rational(6) * n);
    const Rational d_extra = t / (Rational(3) * n);

    PhragmenTimeline tl;
    tl.A = one / M;
    tl.B_pd = one / pd;
    tl.B_p = one / (pd + p_extra);
    tl.B_d = one / (pd + d_extra);
    tl.C = tl.A + tl.A * tl.A * t * t;
    tl.D = one / T;
    tl.X = pd / (pd + p_extra) + t * (tl.B_p - tl.A);
    tl.ordered = tl.A < tl.B_pd && tl.B_pd < tl.C && tl.C < tl.D;
    tl.d_before_p = tl.B_d < tl.B_p;
    tl.x_below_one = tl.X < one;
    return tl;
}

ReductionCheck check_reduction_correctness(const Rx3cInstance& inst, Rule rule, EditKind op,
                                           std::optional<ReductionConstants> scaled, const RadiusOptions& options) {
    const auto red = build_reduction(rule, inst, op, scaled);
    ReductionCheck check;
    check.cover = exact_cover_oracle(inst);
    check.cover_exists = check.cover.has_value();
    if (red.cover_found_unbribed) {
        check.trivially_yes = true;
        check.radius_yes = true;
    } else {
        RadiusQuery q{red.election, rule, red.k, op, red.budget};
        check.answer = solve_radius(q, RadiusMode::Decide, options);
        check.radius_yes = check.answer.changed;
    }
    check.consistent = check.radius_yes == check.cover_exists;
    return check;
}

} // namespace approval
