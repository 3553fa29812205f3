#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "approval/election.hpp"
#include "approval/rules.hpp"

namespace approval {

struct ResamplingParams {
    double p = 0.0;
    double phi = 0.0;
    int m = 1;
    int n = 1;
};

struct PerturbationSpec {
    EditKind op = EditKind::Add;
    double level = 0.0;
    std::uint64_t seed = 0;
};

// Flat key=value file, `#` comments. Lists are comma-separated.
//   rules = av,greedycc,greedypav,phragmen
//   p = 0.1,0.3
//   phi = 0.25,0.5,0.75,1
//   levels = 0,0.01,0.05,...
//   ops = add,remove
//   elections_per_cell = 50
//   m = 50
//   n = 50
//   k = 5
//   seed = 42
// Keys left out keep the defaults below (the desk-scale setup).
struct ExperimentConfig {
    std::vector<Rule> rules{Rule::AV, Rule::GreedyCC, Rule::GreedyPAV, Rule::Phragmen};
    std::vector<double> p_values{0.1, 0.3};
    std::vector<double> phi_values{0.25, 0.5, 0.75, 1.0};
    std::vector<double> levels = default_levels();
    std::vector<EditKind> ops{EditKind::Add, EditKind::Remove};
    int elections_per_cell = 50;
    int m = 50;
    int n = 50;
    int k = 5;
    std::uint64_t seed = 42;

    // 0, 0.01, 0.05, 0.10, ..., 0.95.
    static std::vector<double> default_levels();
    // Throws DomainError when an invariant fails.
    void validate() const;
};

ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig read_experiment_config(const std::string& path);

struct ExperimentRecord {
    Rule rule = Rule::AV;
    EditKind op = EditKind::Add;
    double p = 0.0;
    double phi = 0.0;
    double level = 0.0;
    int num_elections = 0;
    double frac_changed = 0.0;
    double avg_replaced = 0.0;
    double std_replaced = 0.0; // population standard deviation
    std::uint64_t seed = 0;

    friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

// Resampling model: a uniformly random central set of floor(p*m) candidates,
// then per (voter, candidate) pair, with probability phi, the approval is
// redrawn as approved with probability p. Unit-weight groups, one per voter.
Election sample_resampling(const ResamplingParams& params, std::uint64_t seed);

// floor(level * pool), where pool counts the absent approvals (Add) or the
// present ones (Remove) over all voters.
std::int64_t perturbation_count(const Election& e, EditKind op, double level);

// Flips perturbation_count distinct (voter, candidate) slots chosen
// uniformly without replacement. Weighted groups are expanded to unit
// voters first.
Election perturb(const Election& e, const PerturbationSpec& spec);

// One record per (rule, op, p, phi, level), sorted in that order. Each
// election is shared by every rule, op and level of its (p, phi) cell.
// Output does not depend on `workers`.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg, unsigned workers = 1);

// rule,op,p,phi,level,num_elections,frac_changed,avg_replaced,std_replaced,seed
// with six decimals for the floating-point fields.
std::string records_to_csv(std::vector<ExperimentRecord> records);
std::vector<ExperimentRecord> parse_records_csv(std::string_view text);
void write_records_csv(const std::vector<ExperimentRecord>& records, const std::string& path);
std::vector<ExperimentRecord> read_records_csv(const std::string& path);

// Rounds to the six decimals the CSV carries, so records round-trip exactly.
double quantize6(double x);

} // namespace approval
