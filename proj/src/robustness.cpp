#include "approval/robustness.hpp"

namespace approval {

int measure_robustness(const Election& e, const ApprovalEdit& edit, Rule rule, int k) {
    const Election edited = apply_edit(e, edit);
    return committee_difference(compute_committee(rule, e, k), compute_committee(rule, edited, k));
}

WitnessPair make_edit_pair(const Election& e, const ApprovalEdit& edit, Rule rule, int k) {
    Election edited = apply_edit(e, edit);
    if (edit.kind == EditKind::Add) {
        WitnessPair w{e, std::move(edited), edit, k, {}, {}};
        w.expected_before = compute_committee(rule, w.before, k);
        w.expected_after = compute_committee(rule, w.after, k);
        return w;
    }
    // A Remove from e is an Add from the edited election back to e (as a voter multiset).
    WitnessPair w{edited, e, edit.inverse(), k, {}, {}};
    w.expected_before = compute_committee(rule, w.before, k);
    w.expected_after = compute_committee(rule, w.after, k);
    return w;
}

bool verify_add_remove_symmetry(Rule rule, const WitnessPair& witness) {
    const int add_direction = measure_robustness(witness.before, witness.edit, rule, witness.k);
    const int remove_direction = measure_robustness(witness.after, witness.edit.inverse(), rule, witness.k);
    return add_direction == remove_direction;
}

} // namespace approval
