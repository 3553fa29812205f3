// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "approval/experiments.hpp"
#include "approval/reductions.hpp"
#include "approval/robustness.hpp"
#include "support.hpp"

using namespace approval;
namespace fs = std::filesystem;
namespace ts = testing_support;

namespace {

const Rule kSequential[] = {Rule::GreedyCC, Rule::GreedyPAV, Rule::Phragmen};

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " [" << timing << "] " << o.detail << std::endl;
    failures += o.pass ? 0 : 1;
}

unsigned hw_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Rx3cInstance fixture(const std::string& name) {
    return read_rx3c_file(std::string(FIXTURE_DIR) + "/rx3c/" + name + ".rx3c");
}

ApprovalEdit random_toggle(const Election& e, std::mt19937_64& rng) {
    const auto g = static_cast<std::size_t>(rng() % e.num_groups());
    const auto c = static_cast<CandidateId>(rng() % static_cast<unsigned>(e.num_candidates()));
    return {e.group(g).approves(c) ? EditKind::Remove : EditKind::Add, g, c};
}

Outcome witness_replay() {
    int bad = 0;
    for (auto rule : kSequential) {
        for (int k = 2; k <= 10; ++k) {
            const auto w = build_replacement_witness(rule, k);
            const auto before = compute_committee(rule, w.before, k);
            const auto after = compute_committee(rule, w.after, k);
            std::vector<CandidateId> a(static_cast<std::size_t>(k));
            std::vector<CandidateId> b(static_cast<std::size_t>(k));
            std::iota(a.begin(), a.end(), 0);
            std::iota(b.begin(), b.end(), k);
            if (!(before == Committee(a)) || !(after == Committee(b)) || committee_difference(before, after) != k) {
                ++bad;
            }
        }
    }
    return {bad == 0, std::to_string(27 - bad) + "/27 pairs flip all k seats"};
}

Outcome witness_replay_timed() {
    const auto start = std::chrono::steady_clock::now();
    auto o = witness_replay();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.pass = o.pass && secs < 1.0;
    o.detail += ", runtime < 1s: " + std::string(secs < 1.0 ? "yes" : "no");
    return o;
}

Outcome add_remove_symmetry() {
    int checked = 0;
    int bad = 0;
    for (auto rule : kSequential) {
        for (int k = 2; k <= 10; ++k) {
            ++checked;
            bad += verify_add_remove_symmetry(rule, build_replacement_witness(rule, k)) ? 0 : 1;
        }
    }
    std::mt19937_64 rng(1001);
    for (int iter = 0; iter < 200; ++iter) {
        const auto e = ts::random_election(rng);
        const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(e.num_candidates()));
        const auto edit = random_toggle(e, rng);
        for (auto rule : kSequential) {
            ++checked;
            bad += verify_add_remove_symmetry(rule, make_edit_pair(e, edit, rule, k)) ? 0 : 1;
        }
    }
    return {bad == 0, std::to_string(checked - bad) + "/" + std::to_string(checked) + " pairs symmetric"};
}

Outcome phragmen_timings() {
    const auto w = build_replacement_witness(Rule::Phragmen, 2);
    auto times = [](const Election& e) {
        std::string s;
        for (const auto& ev : compute_phragmen(e, 2, e.tie_order()).trace.events) {
            s += (s.empty() ? "" : ",") + ev.time.str();
        }
        return s;
    };
    const auto before = times(w.before);
    const auto after = times(w.after);
    return {before == "1/2,1/2" && after == "1/3,1/2", "E: " + before + "  E': " + after};
}

Outcome phragmen_timeline_check() {
    const auto start = std::chrono::steady_clock::now();
    std::vector<Rx3cInstance> insts{{1, {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}}}, fixture("nocover_a"), fixture("cover_s2_s3")};
    // n = 3: three partitions of 0..8 into triples
    insts.push_back({3, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6}, {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {1, 5, 6}, {2, 3, 7}}});
    int ok = 0;
    int total = 0;
    for (const auto& inst : insts) {
        for (auto op : {EditKind::Add, EditKind::Remove}) {
            ++total;
            ok += phragmen_timeline(build_phragmen_reduction(inst, op)).ok() ? 1 : 0;
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {ok == total && secs < 1.0, std::to_string(ok) + "/" + std::to_string(total) +
                                          " reductions (n = 1, 2, 2, 3) satisfy every ordering, runtime < 1s: " +
                                          (secs < 1.0 ? "yes" : "no")};
}

Outcome reduction_equivalence() {
    const char* names[] = {"cover_s1_s4", "cover_s2_s3", "cover_greedy", "cover_s3_s6",
                           "nocover_a",   "nocover_b",   "nocover_c",    "nocover_d"};
    const auto start = std::chrono::steady_clock::now();
    int ok = 0;
    int total = 0;
    int covers = 0;
    std::string failed;
    for (auto name : names) {
        const auto inst = fixture(name);
        if (!validate_rx3c(inst).valid || inst.n != 2) {
            return {false, std::string("invalid corpus instance ") + name};
        }
        covers += exact_cover_oracle(inst).has_value() ? 1 : 0;
        for (auto rule : kSequential) {
            // CC/PAV use scaled constants; see README for why the literal ones cannot work at n = 2.
            const auto c = rule == Rule::Phragmen ? std::optional<ReductionConstants>()
                                                  : std::optional<ReductionConstants>({1000, 30});
            for (auto op : {EditKind::Add, EditKind::Remove}) {
                ++total;
                const auto chk = check_reduction_correctness(inst, rule, op, c, {RadiusOptions{}.cap, hw_workers()});
                const int expected_budget = op == EditKind::Add ? 2 : 4;
                const bool good = chk.consistent && build_reduction(rule, inst, op, c).budget == expected_budget;
                ok += good ? 1 : 0;
                if (!good) {
                    failed += std::string(" ") + name + "/" + to_string(rule) + "/" + to_string(op);
                }
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool corpus_ok = covers >= 2 && 8 - covers >= 2;
    return {ok == total && corpus_ok && secs < 600.0,
            std::to_string(ok) + "/" + std::to_string(total) + " consistent over " + std::to_string(covers) +
                " cover and " + std::to_string(8 - covers) + " no-cover instances, runtime < 10 min: " +
                (secs < 600.0 ? "yes" : "no") + failed};
}

Outcome greedycc_approximation() {
    std::mt19937_64 rng(2002);
    ts::GenSpec spec;
    spec.min_m = 3;
    spec.max_m = 8;
    spec.max_groups = 10;
    spec.max_weight = 1;
    const double bound = 1.0 - 1.0 / std::exp(1.0);
    int violations = 0;
    double worst = 1.0;
    for (int iter = 0; iter < 500; ++iter) {
        const auto e = ts::random_election(rng, spec);
        const int k = 1 + static_cast<int>(rng() % 3);
        const auto greedy = compute_committee(Rule::GreedyCC, e, k);
        const auto opt = brute_force_thiele(e, k, e.tie_order(), Owa::CC);
        const auto g = lambda_score(e, greedy.members(), Owa::CC).to_mpq();
        const auto o = lambda_score(e, opt.members(), Owa::CC).to_mpq();
        if (o > 0) {
            worst = std::min(worst, mpq_class(g / o).get_d());
        }
        if (g.get_d() < bound * o.get_d()) {
            ++violations;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d violations in 500 elections, worst ratio %.4f (bound %.4f)", violations, worst,
                  bound);
    return {violations == 0, buf};
}

Outcome av_level_one() {
    std::mt19937_64 rng(3003);
    ts::GenSpec spec;
    spec.max_m = 8;
    spec.max_groups = 10;
    int violations = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        const auto e = ts::random_election(rng, spec);
        const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(e.num_candidates()));
        const auto edit = random_toggle(e, rng);
        const auto before = compute_av(e, k, e.tie_order());
        const auto after = compute_av(apply_edit(e, edit), k, e.tie_order());
        violations += committee_difference(before, after) > 1 ? 1 : 0;
    }
    return {violations == 0, std::to_string(violations) + " violations in 1000 pairs"};
}

struct DeskResults {
    std::vector<ExperimentRecord> records;
    double secs = 0;
};

const DeskResults& desk() {
    static const DeskResults results = [] {
        DeskResults r;
        const auto start = std::chrono::steady_clock::now();
        const auto cfg = read_experiment_config(std::string(FIXTURE_DIR) + "/experiment/desk.cfg");
        r.records = run_experiment(cfg, hw_workers());
        r.secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_records_csv(r.records, "desk_experiment.csv");
        return r;
    }();
    return results;
}

Outcome desk_zero_level() {
    const auto& d = desk();
    int bad = 0;
    int cells = 0;
    for (const auto& r : d.records) {
        if (r.level == 0.0) {
            ++cells;
            bad += r.frac_changed == 0.0 ? 0 : 1;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d/%d level-0 cells unchanged, runtime %.1fs (< 30 min)", cells - bad, cells,
                  d.secs);
    return {bad == 0 && cells > 0 && d.secs < 1800.0, buf};
}

using Key = std::tuple<Rule, EditKind>;

Outcome desk_phi_trend() {
    // Per rule/op and level: mean over p of frac_changed, phi = 1 against phi = 0.25.
    std::map<Key, std::map<double, std::pair<double, double>>> sums;
    for (const auto& r : desk().records) {
        auto& cell = sums[{r.rule, r.op}][r.level];
        if (r.phi == 1.0) {
            cell.first += r.frac_changed;
        } else if (r.phi == 0.25) {
            cell.second += r.frac_changed;
        }
    }
    bool pass = true;
    std::string detail;
    for (const auto& [key, levels] : sums) {
        int ok = 0;
        for (const auto& [level, ab] : levels) {
            ok += ab.first >= ab.second ? 1 : 0;
        }
        const double frac = static_cast<double>(ok) / static_cast<double>(levels.size());
        char buf[64];
        std::snprintf(buf, sizeof buf, " %s/%s=%.3f", to_string(std::get<0>(key)).c_str(),
                      to_string(std::get<1>(key)).c_str(), frac);
        detail += buf;
        pass = pass && frac >= 0.9;
    }
    return {pass, "share of levels with phi=1 >= phi=0.25 (need >= 0.9):" + detail};
}

Outcome desk_p_trend() {
    std::map<std::tuple<Rule, EditKind, double, double>, std::pair<double, double>> cells;
    for (const auto& r : desk().records) {
        auto& c = cells[{r.rule, r.op, r.phi, r.level}];
        (r.p == 0.3 ? c.first : c.second) = r.frac_changed;
    }
    int ok = 0;
    for (const auto& [key, v] : cells) {
        ok += v.first >= v.second ? 1 : 0;
    }
    const double frac = static_cast<double>(ok) / static_cast<double>(cells.size());
    char buf[96];
    std::snprintf(buf, sizeof buf, "p=0.3 >= p=0.1 in %d/%zu cells = %.3f (need >= 0.8)", ok, cells.size(), frac);
    return {frac >= 0.8, buf};
}

Outcome desk_cc_stands_out() {
    // gap(X) = max over level of the mean over (p, phi) of |X - PAV| on Remove frac_changed.
    std::map<std::tuple<Rule, double, double, double>, double> curve;
    std::vector<double> levels;
    for (const auto& r : desk().records) {
        if (r.op == EditKind::Remove) {
            curve[{r.rule, r.p, r.phi, r.level}] = r.frac_changed;
            levels.push_back(r.level);
        }
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    auto gap = [&](Rule rule) {
        double best = 0;
        for (double level : levels) {
            double sum = 0;
            int count = 0;
            for (const auto& [key, v] : curve) {
                if (std::get<0>(key) == rule && std::get<3>(key) == level) {
                    sum += std::abs(v - curve.at({Rule::GreedyPAV, std::get<1>(key), std::get<2>(key), level}));
                    ++count;
                }
            }
            best = std::max(best, sum / count);
        }
        return best;
    };
    const double cc = gap(Rule::GreedyCC);
    const double av = gap(Rule::AV);
    const double ph = gap(Rule::Phragmen);
    char buf[128];
    std::snprintf(buf, sizeof buf, "gap to PAV: CC %.4f, AV %.4f, Phragmen %.4f", cc, av, ph);
    return {cc > av && cc > ph, buf};
}

struct Run {
    int code = -1;
    std::string out;
};

Run run_cli(const std::string& args) {
    const std::string cmd = std::string(APPROBUST_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return r;
    }
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), got);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp_dir(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::string all;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        all += fs::relative(f, dir).string() + "\n" + s.str();
    }
    return all;
}

Outcome cli_determinism() {
    const fs::path root = fs::temp_directory_path() / "approbust_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    {
        std::ofstream(root / "e.appel") << "m 4\n1: 0 2\n1: 0 3\n1: 1 2\n1: 1 3\n1:\n";
        std::ofstream(root / "r.appel") << "m 6\n3: 0 1\n2: 2 3 4\n1: 5\n2: 0 5\n1:\n";
        std::ofstream(root / "x.cfg") << "p = 0.1,0.3\nphi = 0.5,1\nlevels = 0,0.05,0.3\nelections_per_cell = 10\n"
                                         "m = 20\nn = 20\nk = 4\nseed = 5\n";
    }
    const std::string e = (root / "e.appel").string();
    const std::string r = (root / "r.appel").string();
    const std::string rx = std::string(FIXTURE_DIR) + "/rx3c/cover_s2_s3.rx3c";
    // {out} is replaced by a fresh directory per invocation; {w} by the worker count.
    const std::vector<std::string> commands{
        "compute --rule phragmen --k 3 --trace --election " + r,
        "compute --rule greedypav --k 2 --trace --election " + e,
        "radius --rule greedycc --op remove --budget 3 --k 2 --minimize --workers {w} --election " + r,
        "radius --rule phragmen --op add --budget 2 --k 3 --workers {w} --election " + r,
        "witness --rule greedypav --k 4 --out-dir {out}",
        "reduce --rule phragmen --op remove --rx3c " + rx + " --out-dir {out}",
        "perturb --op add --level 0.3 --seed 11 --election " + r,
        "experiment --config " + (root / "x.cfg").string() + " --out {out}/x.csv --seed 9 --workers {w}",
    };
    int ok = 0;
    int runs = 0;
    std::string failed;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        std::string reference;
        for (int attempt = 0; attempt < 4; ++attempt) {
            const std::string workers = attempt < 2 ? "1" : "4";
            const fs::path out = root / ("c" + std::to_string(i) + "_" + std::to_string(attempt));
            fs::create_directories(out);
            std::string cmd = commands[i];
            for (auto [token, value] : {std::pair<std::string, std::string>{"{out}", out.string()}, {"{w}", workers}}) {
                for (auto pos = cmd.find(token); pos != std::string::npos; pos = cmd.find(token)) {
                    cmd.replace(pos, token.size(), value);
                }
            }
            const auto res = run_cli(cmd);
            std::string captured = std::to_string(res.code) + "\n" + res.out + slurp_dir(out);
            // Output directories differ by name only; normalise them away.
            for (auto pos = captured.find(out.string()); pos != std::string::npos; pos = captured.find(out.string())) {
                captured.replace(pos, out.string().size(), "{out}");
            }
            ++runs;
            if (attempt == 0) {
                reference = captured;
                ok += res.code == 0 ? 1 : 0;
            } else if (captured == reference && res.code == 0) {
                ++ok;
            } else {
                failed += " #" + std::to_string(i);
            }
        }
    }
    fs::remove_all(root);
    return {ok == runs, std::to_string(ok) + "/" + std::to_string(runs) +
                            " runs byte-identical across repeats and --workers 1/4" + failed};
}

} // namespace

int main() {
    report("witness replay (GreedyCC/GreedyPAV/Phragmen, k=2..10)", witness_replay_timed);
    report("add/remove symmetry on witnesses and 200 random pairs", add_remove_symmetry);
    report("Phragmen exact purchase times on the k=2 witness", phragmen_timings);
    report("Phragmen reduction timeline, n in {1,2,3}", phragmen_timeline_check);
    report("reduction <=> exact cover on the n=2 corpus", reduction_equivalence);
    report("GreedyCC (1-1/e) approximation, 500 elections", greedycc_approximation);
    report("AV changes at most one seat per edit, 1000 pairs", av_level_one);
    report("desk experiment (i): level 0 never changes the committee", desk_zero_level);
    report("desk experiment (ii): phi=1 at least phi=0.25 per rule/op", desk_phi_trend);
    report("desk experiment (iii): p=0.3 at least p=0.1", desk_p_trend);
    report("desk experiment (iv): CC stands out on Remove", desk_cc_stands_out);
    report("CLI determinism", cli_determinism);
    std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
