#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <thread>

#include "approval/errors.hpp"
#include "approval/robustness.hpp"

namespace approval {

namespace {

using u128 = unsigned __int128;

struct Slot {
    std::size_t group;
    std::vector<CandidateId> pattern;  // candidates toggled for one voter
    std::vector<CandidateId> approvals; // that voter's approvals afterwards
};

std::vector<std::size_t> group_visit_order(const Election& e) {
    std::vector<std::size_t> idx(e.num_groups());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return e.group(a).approvals.size() < e.group(b).approvals.size();
    });
    return idx;
}

std::vector<CandidateId> toggleable(const Election& e, const VoterGroup& g, EditKind op) {
    if (op == EditKind::Remove) {
        return g.approvals;
    }
    std::vector<CandidateId> out;
    for (CandidateId c = 0; c < e.num_candidates(); ++c) {
        if (!g.approves(c)) {
            out.push_back(c);
        }
    }
    return out;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b, std::uint64_t limit) {
    const u128 s = u128(a) + b;
    return s > limit ? limit + 1 : static_cast<std::uint64_t>(s);
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b, std::uint64_t limit) {
    const u128 p = u128(a) * b;
    return p > limit ? limit + 1 : static_cast<std::uint64_t>(p);
}

// Multisets of x items drawn from `types` kinds: C(types + x - 1, x).
std::uint64_t multichoose(std::uint64_t types, std::uint64_t x, std::uint64_t limit) {
    if (x == 0) {
        return 1;
    }
    if (types == 0) {
        return 0;
    }
    if (types > limit) {
        return limit + 1;
    }
    return binomial_capped(types + x - 1, x, limit);
}

// ways[s] = number of canonical per-group edit multisets of total size s
// (at most `capacity` voters used), s = 0..budget.
std::vector<std::uint64_t> group_ways(std::uint64_t toggles, std::int64_t capacity, int budget, std::uint64_t limit) {
    const auto B = static_cast<std::size_t>(budget);
    const auto cap = static_cast<std::size_t>(std::min<std::int64_t>(capacity, budget));
    // f[s][u]: total size s, u voters used
    std::vector<std::vector<std::uint64_t>> f(B + 1, std::vector<std::uint64_t>(cap + 1, 0));
    f[0][0] = 1;
    for (std::size_t j = 1; j <= B; ++j) {
        const std::uint64_t kinds = binomial_capped(toggles, j, limit);
        if (kinds == 0) {
            continue;
        }
        auto next = f;
        for (std::size_t s = 0; s <= B; ++s) {
            for (std::size_t u = 0; u <= cap; ++u) {
                if (f[s][u] == 0) {
                    continue;
                }
                for (std::size_t x = 1; s + j * x <= B && u + x <= cap; ++x) {
                    const auto ways = sat_mul(f[s][u], multichoose(kinds, x, limit), limit);
                    next[s + j * x][u + x] = sat_add(next[s + j * x][u + x], ways, limit);
                }
            }
        }
        f = std::move(next);
    }
    std::vector<std::uint64_t> out(B + 1, 0);
    for (std::size_t s = 0; s <= B; ++s) {
        for (std::size_t u = 0; u <= cap; ++u) {
            out[s] = sat_add(out[s], f[s][u], limit);
        }
    }
    return out;
}

// Count per exact depth 0..budget.
std::vector<std::uint64_t> depth_counts(const RadiusQuery& q, std::uint64_t limit) {
    const auto B = static_cast<std::size_t>(q.budget);
    std::vector<std::uint64_t> total(B + 1, 0);
    total[0] = 1;
    for (const auto& g : q.election.groups()) {
        const auto t = toggleable(q.election, g, q.op).size();
        const auto ways = group_ways(t, g.weight, q.budget, limit);
        std::vector<std::uint64_t> next(B + 1, 0);
        for (std::size_t a = 0; a <= B; ++a) {
            if (total[a] == 0) {
                continue;
            }
            for (std::size_t b = 0; a + b <= B; ++b) {
                next[a + b] = sat_add(next[a + b], sat_mul(total[a], ways[b], limit), limit);
            }
        }
        total = std::move(next);
    }
    return total;
}

void patterns_of(const std::vector<CandidateId>& items, std::size_t size, std::size_t from,
                 std::vector<CandidateId>& cur, std::vector<std::vector<CandidateId>>& out) {
    if (cur.size() == size) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = from; i + (size - cur.size()) <= items.size(); ++i) {
        cur.push_back(items[i]);
        patterns_of(items, size, i + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<Slot> build_slots(const RadiusQuery& q) {
    std::vector<Slot> slots;
    for (auto gi : group_visit_order(q.election)) {
        const auto& g = q.election.group(gi);
        const auto items = toggleable(q.election, g, q.op);
        for (std::size_t size = 1; size <= static_cast<std::size_t>(q.budget) && size <= items.size(); ++size) {
            std::vector<std::vector<CandidateId>> pats;
            std::vector<CandidateId> cur;
            patterns_of(items, size, 0, cur, pats);
            for (auto& p : pats) {
                Slot s{gi, p, {}};
                if (q.op == EditKind::Add) {
                    std::set_union(g.approvals.begin(), g.approvals.end(), p.begin(), p.end(),
                                   std::back_inserter(s.approvals));
                } else {
                    std::set_difference(g.approvals.begin(), g.approvals.end(), p.begin(), p.end(),
                                        std::back_inserter(s.approvals));
                }
                slots.push_back(std::move(s));
            }
        }
    }
    return slots;
}

// Depth-first search over nondecreasing slot sequences whose pattern sizes sum
// to the target depth. Edits are applied to a scratch group list in place.
class Searcher {
public:
    Searcher(const RadiusQuery& q, const std::vector<Slot>& slots, const Committee& base)
        : q_(q), slots_(slots), base_(base), scratch_(q.election.groups().begin(), q.election.groups().end()) {}

    // First flipping sequence starting with `first` at exactly `depth`.
    bool search_branch(std::size_t first, int depth, std::vector<std::size_t>& found) {
        chosen_.clear();
        return descend(first, depth, true, found);
    }

    std::uint64_t evaluations() const { return evaluations_; }

private:
    bool descend(std::size_t from, int remaining, bool fixed_first, std::vector<std::size_t>& found) {
        if (remaining == 0) {
            ++evaluations_;
            const auto got = detail::run_rule(q_.rule, q_.election.num_candidates(), scratch_, q_.k,
                                              q_.election.tie_order());
            if (!(got == base_)) {
                found = chosen_;
                return true;
            }
            return false;
        }
        const std::size_t last = fixed_first ? from + 1 : slots_.size();
        for (std::size_t i = from; i < last; ++i) {
            const Slot& s = slots_[i];
            const int size = static_cast<int>(s.pattern.size());
            if (size > remaining) {
                if (fixed_first) {
                    return false;
                }
                continue;
            }
            auto& g = scratch_[s.group];
            if (g.weight == 0) {
                continue;
            }
            g.weight -= 1;
            scratch_.push_back({1, s.approvals});
            chosen_.push_back(i);
            const bool hit = descend(i, remaining - size, false, found);
            chosen_.pop_back();
            scratch_.pop_back();
            scratch_[s.group].weight += 1;
            if (hit) {
                return true;
            }
        }
        return false;
    }

    const RadiusQuery& q_;
    const std::vector<Slot>& slots_;
    const Committee& base_;
    std::vector<VoterGroup> scratch_;
    std::vector<std::size_t> chosen_;
    std::uint64_t evaluations_ = 0;
};

std::vector<ApprovalEdit> replay_edits(const RadiusQuery& q, const std::vector<Slot>& slots,
                                       const std::vector<std::size_t>& chosen, Election& current) {
    std::vector<std::size_t> pos(q.election.num_groups());
    std::iota(pos.begin(), pos.end(), 0);
    std::vector<ApprovalEdit> edits;
    for (auto si : chosen) {
        const Slot& s = slots[si];
        const std::size_t idx = pos[s.group];
        const bool splits = current.group(idx).weight > 1;
        for (auto c : s.pattern) {
            ApprovalEdit edit{q.op, idx, c};
            current = apply_edit(current, edit);
            edits.push_back(edit);
            if (splits && c == s.pattern.front()) {
                for (auto& p : pos) {
                    if (p >= idx) {
                        ++p;
                    }
                }
            }
        }
    }
    return edits;
}

} // namespace

std::uint64_t estimate_radius_search(const RadiusQuery& q, std::uint64_t limit) {
    if (q.budget <= 0) {
        return 0;
    }
    const auto counts = depth_counts(q, limit);
    std::uint64_t total = 0;
    for (std::size_t b = 1; b < counts.size(); ++b) {
        total = sat_add(total, counts[b], limit);
    }
    return total;
}

RadiusAnswer solve_radius(const RadiusQuery& q, RadiusMode mode, const RadiusOptions& options) {
    if (q.k < 0 || q.k > q.election.num_candidates()) {
        throw DomainError("k exceeds m");
    }
    if (q.budget < 0) {
        throw DomainError("budget must be nonnegative");
    }
    RadiusAnswer answer;
    if (q.budget == 0) {
        return answer;
    }
    const auto estimate = estimate_radius_search(q, options.cap);
    if (estimate > options.cap) {
        throw ResourceCapExceeded("radius search space too large", estimate, options.cap);
    }

    const Committee base = compute_committee(q.rule, q.election, q.k);
    const auto slots = build_slots(q);
    const unsigned workers = std::max(1u, options.workers);

    for (int depth = 1; depth <= q.budget; ++depth) {
        std::atomic<std::size_t> next{0};
        std::atomic<std::size_t> best_branch{slots.size()};
        std::atomic<std::uint64_t> evaluations{0};
        std::mutex mu;
        std::vector<std::size_t> best_found;

        auto work = [&] {
            Searcher searcher(q, slots, base);
            std::vector<std::size_t> found;
            while (true) {
                const std::size_t branch = next.fetch_add(1);
                if (branch >= slots.size() || branch > best_branch.load()) {
                    break;
                }
                if (searcher.search_branch(branch, depth, found)) {
                    std::lock_guard lock(mu);
                    if (branch < best_branch.load()) {
                        best_branch.store(branch);
                        best_found = found;
                    }
                    break;
                }
            }
            evaluations += searcher.evaluations();
        };

        if (workers == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back(work);
            }
            for (auto& t : pool) {
                t.join();
            }
        }
        answer.evaluations += evaluations.load();

        if (best_branch.load() < slots.size()) {
            Election current = q.election;
            answer.changed = true;
            answer.witness_edits = replay_edits(q, slots, best_found, current);
            if (compute_committee(q.rule, current, q.k) == base) {
                throw std::logic_error("radius witness does not replay to a different committee");
            }
            if (mode == RadiusMode::Minimize) {
                answer.minimal_radius = depth;
            }
            return answer;
        }
    }
    return answer;
}

} // namespace approval
