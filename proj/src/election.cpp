#include "approval/election.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "approval/errors.hpp"

namespace approval {

bool VoterGroup::approves(CandidateId c) const {
    return std::binary_search(approvals.begin(), approvals.end(), c);
}

TieOrder::TieOrder(std::vector<CandidateId> order) : order_(std::move(order)) {
    rank_.assign(order_.size(), -1);
    for (std::size_t pos = 0; pos < order_.size(); ++pos) {
        const CandidateId c = order_[pos];
        if (c < 0 || static_cast<std::size_t>(c) >= order_.size() || rank_[static_cast<std::size_t>(c)] != -1) {
            throw DomainError("tie order is not a permutation of 0..m-1");
        }
        rank_[static_cast<std::size_t>(c)] = static_cast<int>(pos);
    }
}

TieOrder TieOrder::ascending(int num_candidates) {
    std::vector<CandidateId> order(static_cast<std::size_t>(num_candidates));
    std::iota(order.begin(), order.end(), 0);
    return TieOrder(std::move(order));
}

bool TieOrder::is_ascending() const {
    for (std::size_t i = 0; i < order_.size(); ++i) {
        if (order_[i] != static_cast<CandidateId>(i)) {
            return false;
        }
    }
    return true;
}

Election::Election(int num_candidates, std::vector<VoterGroup> groups)
    : Election(num_candidates, std::move(groups), TieOrder::ascending(std::max(num_candidates, 0))) {}

Election::Election(int num_candidates, std::vector<VoterGroup> groups, TieOrder order)
    : m_(num_candidates), groups_(std::move(groups)), order_(std::move(order)) {
    if (m_ < 1) {
        throw DomainError("election needs at least one candidate");
    }
    if (order_.size() != m_) {
        throw DomainError("tie order size differs from candidate count");
    }
    for (auto& g : groups_) {
        if (g.weight < 1) {
            throw DomainError("voter group weight must be >= 1");
        }
        std::sort(g.approvals.begin(), g.approvals.end());
        if (std::adjacent_find(g.approvals.begin(), g.approvals.end()) != g.approvals.end()) {
            throw DomainError("duplicate candidate in an approval set");
        }
        if (!g.approvals.empty() && (g.approvals.front() < 0 || g.approvals.back() >= m_)) {
            throw DomainError("approval index out of range");
        }
        n_ += g.weight;
    }
    if (n_ <= 0) {
        throw DomainError("election needs at least one voter");
    }
}

Election Election::with_tie_order(TieOrder order) const {
    return Election(m_, groups_, std::move(order));
}

bool Election::same_voters(const Election& other) const {
    if (m_ != other.m_ || !(order_ == other.order_)) {
        return false;
    }
    auto tally = [](const Election& e) {
        std::map<std::vector<CandidateId>, std::int64_t> counts;
        for (const auto& g : e.groups_) {
            counts[g.approvals] += g.weight;
        }
        return counts;
    };
    return tally(*this) == tally(other);
}

Committee::Committee(std::vector<CandidateId> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
        throw DomainError("committee has a duplicate member");
    }
}

bool Committee::contains(CandidateId c) const {
    return std::binary_search(members_.begin(), members_.end(), c);
}

std::string Committee::str() const {
    std::string out;
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i) {
            out += ' ';
        }
        out += std::to_string(members_[i]);
    }
    return out;
}

std::string to_string(EditKind kind) { return kind == EditKind::Add ? "add" : "remove"; }

EditKind parse_edit_kind(std::string_view text) {
    if (text == "add") {
        return EditKind::Add;
    }
    if (text == "remove") {
        return EditKind::Remove;
    }
    throw DomainError("unknown operation '" + std::string(text) + "' (expected add|remove)");
}

std::int64_t approval_score(const Election& e, CandidateId c) {
    if (c < 0 || c >= e.num_candidates()) {
        throw DomainError("candidate index out of range");
    }
    std::int64_t score = 0;
    for (const auto& g : e.groups()) {
        if (g.approves(c)) {
            score += g.weight;
        }
    }
    return score;
}

Election apply_edit(const Election& e, const ApprovalEdit& edit) {
    if (edit.group >= e.num_groups()) {
        throw DomainError("edit targets a nonexistent voter group");
    }
    if (edit.candidate < 0 || edit.candidate >= e.num_candidates()) {
        throw DomainError("edit candidate out of range");
    }
    const VoterGroup& target = e.group(edit.group);
    const bool present = target.approves(edit.candidate);
    if (edit.kind == EditKind::Add && present) {
        throw PreconditionError("add: voter already approves candidate " + std::to_string(edit.candidate));
    }
    if (edit.kind == EditKind::Remove && !present) {
        throw PreconditionError("remove: voter does not approve candidate " + std::to_string(edit.candidate));
    }

    VoterGroup edited{1, target.approvals};
    if (edit.kind == EditKind::Add) {
        edited.approvals.insert(std::upper_bound(edited.approvals.begin(), edited.approvals.end(), edit.candidate),
                                edit.candidate);
    } else {
        edited.approvals.erase(std::find(edited.approvals.begin(), edited.approvals.end(), edit.candidate));
    }

    std::vector<VoterGroup> groups(e.groups().begin(), e.groups().end());
    const auto pos = groups.begin() + static_cast<std::ptrdiff_t>(edit.group);
    if (target.weight == 1) {
        *pos = std::move(edited);
    } else {
        pos->weight -= 1;
        groups.insert(pos, std::move(edited));
    }
    return Election(e.num_candidates(), std::move(groups), e.tie_order());
}

int committee_difference(const Committee& a, const Committee& b) {
    if (a.size() != b.size()) {
        throw DomainError("committee sizes differ");
    }
    std::size_t common = 0;
    auto ia = a.members().begin();
    auto ib = b.members().begin();
    while (ia != a.members().end() && ib != b.members().end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++common;
            ++ia;
            ++ib;
        }
    }
    return static_cast<int>(a.size() - common);
}

Election expand_weights(const Election& e) {
    std::vector<VoterGroup> unit;
    unit.reserve(static_cast<std::size_t>(e.num_voters()));
    for (const auto& g : e.groups()) {
        for (std::int64_t i = 0; i < g.weight; ++i) {
            unit.push_back({1, g.approvals});
        }
    }
    return Election(e.num_candidates(), std::move(unit), e.tie_order());
}

} // namespace approval
