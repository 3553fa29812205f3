#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "approval/errors.hpp"
#include "approval/experiments.hpp"
#include "approval/reductions.hpp"
#include "approval/robustness.hpp"
#include "approval/rules.hpp"

using namespace approval;

namespace {

enum Exit { kOk = 0, kUsage = 1, kDomain = 2, kCap = 3 };

std::vector<CandidateId> parse_index_list(const std::string& text) {
    std::vector<CandidateId> out;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (tok.empty() || used != tok.size()) {
            throw DomainError("bad index '" + tok + "' in list");
        }
        out.push_back(v);
    }
    return out;
}

ReductionConstants parse_scaled(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw DomainError("--scaled expects T:t");
    }
    try {
        std::size_t a = 0;
        std::size_t b = 0;
        const std::string big = text.substr(0, colon);
        const std::string small = text.substr(colon + 1);
        ReductionConstants c{std::stoll(big, &a), std::stoll(small, &b)};
        if (a == big.size() && b == small.size()) {
            return c;
        }
    } catch (const std::exception&) {
    }
    throw DomainError("--scaled expects T:t with integer T and t");
}

void print_committee(std::ostream& out, const Committee& c) {
    for (std::size_t i = 0; i < c.members().size(); ++i) {
        out << (i ? " " : "") << c.members()[i];
    }
    out << '\n';
}

struct ComputeArgs {
    std::string rule;
    int k = 0;
    std::string election;
    std::string tie_order;
    bool trace = false;
};

int run_compute(const ComputeArgs& a) {
    const Rule rule = parse_rule(a.rule);
    Election e = read_election_file(a.election);
    if (!a.tie_order.empty()) {
        e = e.with_tie_order(TieOrder(parse_index_list(a.tie_order)));
    }
    if (a.k > e.num_candidates()) {
        throw DomainError("k exceeds m");
    }
    std::ostringstream out;
    if (!a.trace) {
        print_committee(out, compute_committee(rule, e, a.k));
    } else if (rule == Rule::Phragmen) {
        const auto res = compute_phragmen(e, a.k, e.tie_order());
        print_committee(out, res.committee);
        for (const auto& ev : res.trace.events) {
            out << "purchase " << ev.time << ' ' << ev.candidate << '\n';
        }
        for (auto c : res.trace.filled_by_tiebreak) {
            out << "fill " << c << '\n';
        }
    } else if (rule == Rule::AV) {
        const auto committee = compute_committee(rule, e, a.k);
        print_committee(out, committee);
        for (auto c : committee.members()) {
            out << "score " << c << ' ' << approval_score(e, c) << '\n';
        }
    } else {
        const auto res = compute_greedy_thiele(e, a.k, e.tie_order(), rule == Rule::GreedyCC ? Owa::CC : Owa::PAV);
        print_committee(out, res.committee);
        for (const auto& step : res.trace.steps) {
            out << "select " << step.chosen << ' ' << step.marginal << '\n';
        }
    }
    std::cout << out.str();
    return kOk;
}

struct RadiusArgs {
    std::string rule;
    std::string op;
    int budget = 0;
    int k = 0;
    std::string election;
    bool minimize = false;
    std::uint64_t cap = RadiusOptions{}.cap;
    unsigned workers = 1;
};

int run_radius(const RadiusArgs& a) {
    RadiusQuery q{read_election_file(a.election), parse_rule(a.rule), a.k, parse_edit_kind(a.op), a.budget};
    const auto ans = solve_radius(q, a.minimize ? RadiusMode::Minimize : RadiusMode::Decide, {a.cap, a.workers});
    std::ostringstream out;
    out << (ans.changed ? "yes" : "no") << '\n';
    if (a.minimize) {
        out << "radius " << (ans.minimal_radius ? std::to_string(*ans.minimal_radius) : "none") << '\n';
    }
    for (const auto& edit : ans.witness_edits) {
        out << edit.group << ' ' << edit.candidate << '\n';
    }
    std::cout << out.str();
    return kOk;
}

int run_witness(const std::string& rule_name, int k, const std::string& dir) {
    const Rule rule = parse_rule(rule_name);
    const auto w = build_replacement_witness(rule, k);
    write_witness(w, rule, dir);
    std::cout << serialize_witness_header(w, rule);
    return kOk;
}

int run_reduce(const std::string& rule_name, const std::string& op, const std::string& rx3c, const std::string& dir,
               const std::string& scaled) {
    const auto inst = read_rx3c_file(rx3c);
    std::optional<ReductionConstants> constants;
    if (!scaled.empty()) {
        constants = parse_scaled(scaled);
    }
    const auto red = build_reduction(parse_rule(rule_name), inst, parse_edit_kind(op), constants);
    write_reduction(red, dir);
    std::cout << serialize_reduction_header(red);
    return kOk;
}

int run_perturb(const std::string& op, double level, std::uint64_t seed, const std::string& election,
                const std::string& out_path) {
    const auto e = read_election_file(election);
    const auto changed = perturb(e, {parse_edit_kind(op), level, seed});
    if (out_path.empty()) {
        std::cout << serialize_election(changed);
    } else {
        write_election_file(changed, out_path);
    }
    return kOk;
}

int run_experiment_cmd(const std::string& config, const std::string& out_path, std::optional<std::uint64_t> seed,
                       unsigned workers) {
    auto cfg = read_experiment_config(config);
    if (seed) {
        cfg.seed = *seed;
    }
    const auto records = run_experiment(cfg, workers);
    write_records_csv(records, out_path);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Approval-based committee elections and their robustness"};
    app.require_subcommand(1);

    ComputeArgs compute;
    auto* c = app.add_subcommand("compute", "Compute a winning committee");
    c->add_option("--rule", compute.rule, "av|greedycc|greedypav|phragmen")->required();
    c->add_option("--k", compute.k, "Committee size")->required()->check(CLI::NonNegativeNumber);
    c->add_option("--election", compute.election, "Election file (.appel)")->required();
    c->add_option("--tie-order", compute.tie_order, "Comma-separated candidate priority");
    c->add_flag("--trace", compute.trace, "Print marginals or purchase times");

    RadiusArgs radius;
    auto* r = app.add_subcommand("radius", "Decide whether a bounded number of edits changes the outcome");
    r->add_option("--rule", radius.rule)->required();
    r->add_option("--op", radius.op, "add|remove")->required();
    r->add_option("--budget", radius.budget)->required()->check(CLI::NonNegativeNumber);
    r->add_option("--k", radius.k)->required()->check(CLI::NonNegativeNumber);
    r->add_option("--election", radius.election)->required();
    r->add_flag("--minimize", radius.minimize, "Report the least number of edits");
    r->add_option("--cap", radius.cap, "Refuse searches larger than this");
    r->add_option("--workers", radius.workers)->check(CLI::PositiveNumber);

    std::string w_rule;
    int w_k = 0;
    std::string w_dir;
    auto* w = app.add_subcommand("witness", "Write a full-replacement witness pair");
    w->add_option("--rule", w_rule)->required();
    w->add_option("--k", w_k)->required();
    w->add_option("--out-dir", w_dir)->required();

    std::string red_rule;
    std::string red_op;
    std::string red_file;
    std::string red_dir;
    std::string red_scaled;
    auto* red = app.add_subcommand("reduce", "Compile an RX3C instance into a robustness-radius election");
    red->add_option("--rule", red_rule)->required();
    red->add_option("--op", red_op)->required();
    red->add_option("--rx3c", red_file)->required();
    red->add_option("--out-dir", red_dir)->required();
    red->add_option("--scaled", red_scaled, "Replacement constants T:t");

    std::string p_op;
    double p_level = 0;
    std::uint64_t p_seed = 0;
    std::string p_election;
    std::string p_out;
    auto* pert = app.add_subcommand("perturb", "Randomly add or remove a fraction of approvals");
    pert->add_option("--op", p_op)->required();
    pert->add_option("--level", p_level)->required()->check(CLI::Range(0.0, 1.0));
    pert->add_option("--seed", p_seed)->required();
    pert->add_option("--election", p_election)->required();
    pert->add_option("--out", p_out, "Write here instead of stdout");

    std::string x_config;
    std::string x_out;
    std::uint64_t x_seed = 0;
    unsigned x_workers = 1;
    auto* exp = app.add_subcommand("experiment", "Run the perturbation experiment and write a CSV");
    exp->add_option("--config", x_config)->required();
    exp->add_option("--out", x_out)->required();
    auto* seed_opt = exp->add_option("--seed", x_seed, "Overrides the config's seed");
    exp->add_option("--workers", x_workers)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*c) {
            return run_compute(compute);
        }
        if (*r) {
            return run_radius(radius);
        }
        if (*w) {
            return run_witness(w_rule, w_k, w_dir);
        }
        if (*red) {
            return run_reduce(red_rule, red_op, red_file, red_dir, red_scaled);
        }
        if (*pert) {
            return run_perturb(p_op, p_level, p_seed, p_election, p_out);
        }
        if (*exp) {
            return run_experiment_cmd(x_config, x_out, seed_opt->count() ? std::optional(x_seed) : std::nullopt,
                                      x_workers);
        }
    } catch (const ResourceCapExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kCap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDomain;
    }
    return kUsage;
}
