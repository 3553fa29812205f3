#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "approval/errors.hpp"
#include "approval/robustness.hpp"

namespace approval {

WitnessPair build_replacement_witness(Rule rule, int k) {
    if (k < 2) {
        throw DomainError("witness construction needs k >= 2");
    }
    if (rule == Rule::AV) {
        throw DomainError("AV has robustness level 1; no full-replacement witness exists");
    }
    const auto a = [](int i) { return static_cast<CandidateId>(i - 1); };
    const auto b = [k](int i) { return static_cast<CandidateId>(k + i - 1); };

    std::vector<VoterGroup> groups;
    groups.push_back({k - 1, {a(1), b(1)}});
    for (int i = 2; i <= k; ++i) {
        groups.push_back({1, {a(1), b(i)}});
    }
    for (int i = 2; i <= k; ++i) {
        groups.push_back({1, {a(i), b(1)}});
    }
    for (int i = 2; i <= k; ++i) {
        groups.push_back({2 * k - 3, {a(i), b(i)}});
    }
    groups.push_back({1, {}});

    WitnessPair w{Election(2 * k, std::move(groups)), Election(2 * k, {{1, {}}}), {}, k, {}, {}};
    w.edit = {EditKind::Add, w.before.num_groups() - 1, b(1)};
    w.after = apply_edit(w.before, w.edit);

    std::vector<CandidateId> side(static_cast<std::size_t>(k));
    std::iota(side.begin(), side.end(), 0);
    w.expected_before = Committee(side);
    std::iota(side.begin(), side.end(), k);
    w.expected_after = Committee(side);

    const auto got_before = compute_committee(rule, w.before, k);
    const auto got_after = compute_committee(rule, w.after, k);
    if (!(got_before == w.expected_before) || !(got_after == w.expected_after)) {
        throw std::logic_error("witness construction failed to flip " + to_string(rule) + " at k=" +
                               std::to_string(k) + ": got " + got_before.str() + " / " + got_after.str());
    }
    return w;
}

std::string serialize_witness_header(const WitnessPair& w, Rule rule) {
    std::ostringstream out;
    out << "rule " << to_string(rule) << '\n';
    out << "k " << w.k << '\n';
    out << "edit " << to_string(w.edit.kind) << ' ' << w.edit.group << ' ' << w.edit.candidate << '\n';
    out << "expected_before " << w.expected_before.str() << '\n';
    out << "expected_after " << w.expected_after.str() << '\n';
    return out.str();
}

void write_witness(const WitnessPair& w, Rule rule, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    write_election_file(w.before, (base / "before.appel").string());
    write_election_file(w.after, (base / "after.appel").string());
    std::ofstream out(base / "witness.txt", std::ios::binary);
    if (!out) {
        throw DomainError("cannot write witness header in " + dir);
    }
    out << serialize_witness_header(w, rule);
}

} // namespace approval
