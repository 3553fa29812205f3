#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

#include "approval/errors.hpp"
#include "approval/experiments.hpp"
#include "approval/rng.hpp"

namespace approval {

namespace {

// Guards floor() against values like 0.3 * 50 = 14.999999999999998.
constexpr double kFloorSlack = 1e-9;

std::int64_t floor_fraction(double fraction, std::int64_t whole) {
    return static_cast<std::int64_t>(std::floor(fraction * static_cast<double>(whole) + kFloorSlack));
}

std::string_view trim(std::string_view s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) {
        return {};
    }
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const auto comma = value.find(',', start);
        const auto end = comma == std::string_view::npos ? value.size() : comma;
        out.emplace_back(trim(value.substr(start, end - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

double parse_double(const std::string& tok, std::size_t line) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (tok.empty() || used != tok.size()) {
        throw ParseError(line, "expected number, got '" + tok + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& tok, std::size_t line) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        if (!tok.empty() && tok.front() != '-') {
            v = std::stoull(tok, &used);
        }
    } catch (const std::exception&) {
        used = 0;
    }
    if (tok.empty() || used != tok.size()) {
        throw ParseError(line, "expected nonnegative integer, got '" + tok + "'");
    }
    return v;
}

int parse_int(const std::string& tok, std::size_t line) {
    const auto v = parse_u64(tok, line);
    if (v > static_cast<std::uint64_t>(INT32_MAX)) {
        throw ParseError(line, "integer out of range: " + tok);
    }
    return static_cast<int>(v);
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

} // namespace

std::vector<double> ExperimentConfig::default_levels() {
    std::vector<double> out{0.0, 0.01};
    for (int i = 1; i <= 19; ++i) {
        out.push_back(i * 5 / 100.0);
    }
    return out;
}

void ExperimentConfig::validate() const {
    if (rules.empty() || p_values.empty() || phi_values.empty() || levels.empty() || ops.empty()) {
        throw DomainError("experiment config: every list must be nonempty");
    }
    if (elections_per_cell < 1 || m < 1 || n < 1) {
        throw DomainError("experiment config: elections_per_cell, m and n must be positive");
    }
    if (k < 1 || k > m) {
        throw DomainError("experiment config: k exceeds m");
    }
    for (const auto* list : {&p_values, &phi_values, &levels}) {
        for (double x : *list) {
            if (!in_unit(x)) {
                throw DomainError("experiment config: probabilities and levels must lie in [0, 1]");
            }
        }
    }
}

ExperimentConfig parse_experiment_config(std::string_view text) {
    ExperimentConfig cfg;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const auto line = trim(std::string_view(raw).substr(0, hash));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(line_no, "expected key = value");
        }
        const std::string key(trim(line.substr(0, eq)));
        const auto items = split_list(trim(line.substr(eq + 1)));
        auto doubles = [&] {
            std::vector<double> out;
            for (const auto& s : items) {
                out.push_back(parse_double(s, line_no));
            }
            return out;
        };
        auto single = [&]() -> const std::string& {
            if (items.size() != 1) {
                throw ParseError(line_no, "key '" + key + "' takes one value");
            }
            return items.front();
        };
        try {
            if (key == "rules") {
                cfg.rules.clear();
                for (const auto& s : items) {
                    cfg.rules.push_back(parse_rule(s));
                }
            } else if (key == "ops") {
                cfg.ops.clear();
                for (const auto& s : items) {
                    cfg.ops.push_back(parse_edit_kind(s));
                }
            } else if (key == "p") {
                cfg.p_values = doubles();
            } else if (key == "phi") {
                cfg.phi_values = doubles();
            } else if (key == "levels") {
                cfg.levels = doubles();
            } else if (key == "elections_per_cell") {
                cfg.elections_per_cell = parse_int(single(), line_no);
            } else if (key == "m") {
                cfg.m = parse_int(single(), line_no);
            } else if (key == "n") {
                cfg.n = parse_int(single(), line_no);
            } else if (key == "k") {
                cfg.k = parse_int(single(), line_no);
            } else if (key == "seed") {
                cfg.seed = parse_u64(single(), line_no);
            } else {
                throw ParseError(line_no, "unknown key '" + key + "'");
            }
        } catch (const DomainError& err) {
            throw ParseError(line_no, err.what());
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig read_experiment_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DomainError("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str());
}

Election sample_resampling(const ResamplingParams& params, std::uint64_t seed) {
    if (!in_unit(params.p) || !in_unit(params.phi) || params.m < 1 || params.n < 1) {
        throw DomainError("resampling parameters out of range");
    }
    Rng rng(seed);
    const int m = params.m;
    const auto central_size = floor_fraction(params.p, m);

    // Partial Fisher-Yates picks the central set.
    std::vector<CandidateId> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<bool> central(static_cast<std::size_t>(m), false);
    for (std::int64_t i = 0; i < central_size; ++i) {
        const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(m - i));
        std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
        central[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = true;
    }

    std::vector<VoterGroup> groups;
    groups.reserve(static_cast<std::size_t>(params.n));
    for (int v = 0; v < params.n; ++v) {
        VoterGroup g;
        for (CandidateId c = 0; c < m; ++c) {
            bool approve = central[static_cast<std::size_t>(c)];
            if (rng.bernoulli(params.phi)) {
                approve = rng.bernoulli(params.p);
            }
            if (approve) {
                g.approvals.push_back(c);
            }
        }
        groups.push_back(std::move(g));
    }
    return Election(m, std::move(groups));
}

std::int64_t perturbation_count(const Election& e, EditKind op, double level) {
    if (!in_unit(level)) {
        throw DomainError("perturbation level must lie in [0, 1]");
    }
    std::int64_t present = 0;
    for (const auto& g : e.groups()) {
        present += g.weight * static_cast<std::int64_t>(g.approvals.size());
    }
    const std::int64_t pool = op == EditKind::Add ? e.num_voters() * e.num_candidates() - present : present;
    return std::min(pool, floor_fraction(level, pool));
}

Election perturb(const Election& e, const PerturbationSpec& spec) {
    const Election unit = expand_weights(e);
    const auto count = perturbation_count(unit, spec.op, spec.level);
    if (count == 0) {
        return unit;
    }
    const int m = unit.num_candidates();

    // Pool slots in voter-major, candidate-ascending order.
    std::vector<std::int64_t> pool;
    for (std::size_t v = 0; v < unit.num_groups(); ++v) {
        const auto& g = unit.group(v);
        for (CandidateId c = 0; c < m; ++c) {
            if (g.approves(c) == (spec.op == EditKind::Remove)) {
                pool.push_back(static_cast<std::int64_t>(v) * m + c);
            }
        }
    }
    Rng rng(spec.seed);
    for (std::int64_t i = 0; i < count; ++i) {
        const auto j = static_cast<std::size_t>(i) + rng.below(pool.size() - static_cast<std::size_t>(i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(count));
    std::sort(pool.begin(), pool.end());

    std::vector<std::vector<bool>> approves(unit.num_groups(), std::vector<bool>(static_cast<std::size_t>(m), false));
    for (std::size_t v = 0; v < unit.num_groups(); ++v) {
        for (auto c : unit.group(v).approvals) {
            approves[v][static_cast<std::size_t>(c)] = true;
        }
    }
    for (auto slot : pool) {
        const auto v = static_cast<std::size_t>(slot / m);
        const auto c = static_cast<std::size_t>(slot % m);
        approves[v][c] = !approves[v][c];
    }
    std::vector<VoterGroup> groups(unit.num_groups());
    for (std::size_t v = 0; v < groups.size(); ++v) {
        for (CandidateId c = 0; c < m; ++c) {
            if (approves[v][static_cast<std::size_t>(c)]) {
                groups[v].approvals.push_back(c);
            }
        }
    }
    return Election(m, std::move(groups), unit.tie_order());
}

double quantize6(double x) { return std::round(x * 1e6) / 1e6; }

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg, unsigned workers) {
    cfg.validate();
    const std::size_t R = cfg.rules.size();
    const std::size_t O = cfg.ops.size();
    const std::size_t L = cfg.levels.size();
    const std::size_t E = static_cast<std::size_t>(cfg.elections_per_cell);
    const std::size_t cells = cfg.p_values.size() * cfg.phi_values.size();

    // One task per generated election; each fills its own slice of diffs,
    // laid out as [rule][op][level].
    const std::size_t per_task = R * O * L;
    std::vector<int> diffs(cells * E * per_task, 0);

    auto run_task = [&](std::size_t task) {
        const std::size_t cell = task / E;
        const std::size_t idx = task % E;
        const double p = cfg.p_values[cell / cfg.phi_values.size()];
        const double phi = cfg.phi_values[cell % cfg.phi_values.size()];
        const auto election_seed = derive_seed(cfg.seed, {seed_key(p), seed_key(phi), idx});
        const Election e = sample_resampling({p, phi, cfg.m, cfg.n}, election_seed);

        std::vector<Committee> base;
        for (auto rule : cfg.rules) {
            base.push_back(compute_committee(rule, e, cfg.k));
        }
        int* out = diffs.data() + task * per_task;
        for (std::size_t o = 0; o < O; ++o) {
            for (std::size_t l = 0; l < L; ++l) {
                const auto op = cfg.ops[o];
                const auto seed = derive_seed(election_seed, {static_cast<std::uint64_t>(op), seed_key(cfg.levels[l])});
                const Election changed = perturb(e, {op, cfg.levels[l], seed});
                for (std::size_t r = 0; r < R; ++r) {
                    out[(r * O + o) * L + l] =
                        committee_difference(base[r], compute_committee(cfg.rules[r], changed, cfg.k));
                }
            }
        }
    };

    const std::size_t tasks = cells * E;
    const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(tasks)));
    if (threads == 1) {
        for (std::size_t t = 0; t < tasks; ++t) {
            run_task(t);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex mu;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                try {
                    for (std::size_t t = next++; t < tasks; t = next++) {
                        run_task(t);
                    }
                } catch (...) {
                    std::lock_guard lock(mu);
                    failure = std::current_exception();
                    next = tasks;
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    std::vector<ExperimentRecord> records;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        const double p = cfg.p_values[cell / cfg.phi_values.size()];
        const double phi = cfg.phi_values[cell % cfg.phi_values.size()];
        const auto cell_seed = derive_seed(cfg.seed, {seed_key(p), seed_key(phi)});
        for (std::size_t r = 0; r < R; ++r) {
            for (std::size_t o = 0; o < O; ++o) {
                for (std::size_t l = 0; l < L; ++l) {
                    double changed = 0;
                    double sum = 0;
                    double sum_sq = 0;
                    for (std::size_t i = 0; i < E; ++i) {
                        const int d = diffs[(cell * E + i) * per_task + (r * O + o) * L + l];
                        changed += d > 0 ? 1 : 0;
                        sum += d;
                        sum_sq += static_cast<double>(d) * d;
                    }
                    const double mean = sum / static_cast<double>(E);
                    const double var = std::max(0.0, sum_sq / static_cast<double>(E) - mean * mean);
                    records.push_back({cfg.rules[r], cfg.ops[o], quantize6(p), quantize6(phi),
                                       quantize6(cfg.levels[l]), static_cast<int>(E),
                                       quantize6(changed / static_cast<double>(E)), quantize6(mean),
                                       quantize6(std::sqrt(var)), cell_seed});
                }
            }
        }
    }
    std::stable_sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
        return std::tie(a.rule, a.op, a.p, a.phi, a.level) < std::tie(b.rule, b.op, b.p, b.phi, b.level);
    });
    return records;
}

} // namespace approval
