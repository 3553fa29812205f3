#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace approval {

using CandidateId = int;

// `weight` identical voters sharing one approval set (sorted, duplicate-free).
struct VoterGroup {
    std::int64_t weight = 1;
    std::vector<CandidateId> approvals;

    bool approves(CandidateId c) const;
    friend bool operator==(const VoterGroup&, const VoterGroup&) = default;
};

// Candidate priority used to break every tie; position 0 wins.
class TieOrder {
public:
    TieOrder() = default;
    explicit TieOrder(std::vector<CandidateId> order);

    static TieOrder ascending(int num_candidates);

    int size() const noexcept { return static_cast<int>(order_.size()); }
    CandidateId at(int position) const { return order_.at(static_cast<std::size_t>(position)); }
    int rank(CandidateId c) const { return rank_.at(static_cast<std::size_t>(c)); }
    bool prefers(CandidateId a, CandidateId b) const { return rank(a) < rank(b); }
    bool is_ascending() const;
    const std::vector<CandidateId>& order() const noexcept { return order_; }

    friend bool operator==(const TieOrder& a, const TieOrder& b) { return a.order_ == b.order_; }

private:
    std::vector<CandidateId> order_;
    std::vector<int> rank_;
};

// Weighted approval election over candidates 0..m-1.
//
// Immutable after construction. The constructor validates every invariant:
// indices in range, no duplicates inside a group, weights >= 1 and at least
// one voter overall. Approval sets are stored sorted. The tie order defaults
// to ascending candidate index.
class Election {
public:
    Election(int num_candidates, std::vector<VoterGroup> groups);
    Election(int num_candidates, std::vector<VoterGroup> groups, TieOrder order);

    int num_candidates() const noexcept { return m_; }
    std::span<const VoterGroup> groups() const noexcept { return groups_; }
    const VoterGroup& group(std::size_t i) const { return groups_.at(i); }
    std::size_t num_groups() const noexcept { return groups_.size(); }
    std::int64_t num_voters() const noexcept { return n_; }
    const TieOrder& tie_order() const noexcept { return order_; }

    Election with_tie_order(TieOrder order) const;

    // True when both describe the same multiset of voters (group order and
    // splitting ignored). Tie orders must also agree.
    bool same_voters(const Election& other) const;

    friend bool operator==(const Election& a, const Election& b) {
        return a.m_ == b.m_ && a.groups_ == b.groups_ && a.order_ == b.order_;
    }

private:
    int m_;
    std::vector<VoterGroup> groups_;
    TieOrder order_;
    std::int64_t n_ = 0;
};

// Fixed-size candidate set, members sorted ascending.
class Committee {
public:
    Committee() = default;
    explicit Committee(std::vector<CandidateId> members);

    std::size_t size() const noexcept { return members_.size(); }
    bool contains(CandidateId c) const;
    const std::vector<CandidateId>& members() const noexcept { return members_; }
    std::string str() const;

    friend bool operator==(const Committee&, const Committee&) = default;

private:
    std::vector<CandidateId> members_;
};

enum class EditKind { Add, Remove };

// One approval added to / removed from a single voter of `group`.
struct ApprovalEdit {
    EditKind kind = EditKind::Add;
    std::size_t group = 0;
    CandidateId candidate = 0;

    ApprovalEdit inverse() const {
        return {kind == EditKind::Add ? EditKind::Remove : EditKind::Add, group, candidate};
    }
    friend bool operator==(const ApprovalEdit&, const ApprovalEdit&) = default;
};

std::string to_string(EditKind kind);
EditKind parse_edit_kind(std::string_view text);

std::int64_t approval_score(const Election& e, CandidateId c);

// Applies one edit. If the target group has weight w > 1 it is split: the
// edited voter becomes a weight-1 group at the same index and the unchanged
// weight-(w-1) remainder follows it. The inverse edit therefore always uses
// the same (group, candidate) pair.
Election apply_edit(const Election& e, const ApprovalEdit& edit);

// k - |a ∩ b| for equal-size committees.
int committee_difference(const Committee& a, const Committee& b);

// Same election with every weight-w group replaced by w weight-1 groups.
Election expand_weights(const Election& e);

// Text format (.appel):
//   # comment
//   m <int>
//   order <m indices>        (optional)
//   <weight>: <indices...>   (one line per group, empty list allowed)
Election parse_election(std::string_view text);
std::string serialize_election(const Election& e);
Election read_election_file(const std::string& path);
void write_election_file(const Election& e, const std::string& path);

} // namespace approval
