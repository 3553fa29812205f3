#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "approval/errors.hpp"
#include "approval/reductions.hpp"

namespace approval {

Rx3cValidation validate_rx3c(const Rx3cInstance& inst) {
    Rx3cValidation report;
    if (inst.n < 1) {
        report.violations.push_back("n must be positive");
        return report;
    }
    const int size = 3 * inst.n;
    if (static_cast<int>(inst.sets.size()) != size) {
        report.violations.push_back("family has " + std::to_string(inst.sets.size()) + " sets, expected " +
                                    std::to_string(size));
    }
    std::vector<int> occurrences(static_cast<std::size_t>(size), 0);
    for (std::size_t i = 0; i < inst.sets.size(); ++i) {
        auto s = inst.sets[i];
        std::sort(s.begin(), s.end());
        const std::string name = "S" + std::to_string(i + 1);
        if (s[0] == s[1] || s[1] == s[2]) {
            report.violations.push_back(name + " has a repeated element");
        }
        bool in_range = true;
        for (int u : s) {
            if (u < 0 || u >= size) {
                report.violations.push_back(name + " has element " + std::to_string(u) + " outside the universe");
                in_range = false;
            }
        }
        if (in_range && s[0] != s[1] && s[1] != s[2]) {
            for (int u : s) {
                ++occurrences[static_cast<std::size_t>(u)];
            }
        }
    }
    for (int u = 0; u < size; ++u) {
        if (occurrences[static_cast<std::size_t>(u)] != 3) {
            report.violations.push_back("element " + std::to_string(u) + " occurs in " +
                                        std::to_string(occurrences[static_cast<std::size_t>(u)]) + " sets");
        }
    }
    report.valid = report.violations.empty();
    return report;
}

std::optional<std::vector<int>> exact_cover_oracle(const Rx3cInstance& inst, std::uint64_t cap) {
    const auto check = validate_rx3c(inst);
    if (!check.valid) {
        throw DomainError("invalid RX3C instance: " + check.violations.front());
    }
    const int n = inst.n;
    const int total = 3 * n;
    const auto count = binomial_capped(static_cast<std::uint64_t>(total), static_cast<std::uint64_t>(n), cap);
    if (count > cap) {
        throw ResourceCapExceeded("exact-cover enumeration too large", count, cap);
    }
    // n sets of three covering 3n elements are automatically disjoint.
    std::vector<int> pick(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        pick[static_cast<std::size_t>(i)] = i;
    }
    std::vector<bool> covered(static_cast<std::size_t>(total));
    while (true) {
        std::fill(covered.begin(), covered.end(), false);
        bool disjoint = true;
        for (int si : pick) {
            for (int u : inst.sets[static_cast<std::size_t>(si)]) {
                if (covered[static_cast<std::size_t>(u)]) {
                    disjoint = false;
                }
                covered[static_cast<std::size_t>(u)] = true;
            }
        }
        if (disjoint) {
            return pick;
        }
        int i = n - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == total - n + i) {
            --i;
        }
        if (i < 0) {
            return std::nullopt;
        }
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) {
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

namespace {

std::string_view trim(std::string_view s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) {
        return {};
    }
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

int to_int(std::string_view tok, std::size_t line) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(line, "expected integer, got '" + std::string(tok) + "'");
    }
    return v;
}

} // namespace

Rx3cInstance parse_rx3c(std::string_view text) {
    Rx3cInstance inst;
    bool have_n = false;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::istringstream toks{std::string(line)};
        std::string head;
        toks >> head;
        if (!have_n) {
            std::string value;
            if (head != "n" || !(toks >> value)) {
                throw ParseError(line_no, "expected header 'n <int>'");
            }
            inst.n = to_int(value, line_no);
            if (inst.n < 1) {
                throw ParseError(line_no, "n must be positive");
            }
            have_n = true;
            continue;
        }
        const std::string expected = "S" + std::to_string(inst.sets.size() + 1) + ":";
        if (head != expected) {
            throw ParseError(line_no, "expected '" + expected + " a b c'");
        }
        std::array<int, 3> s{};
        std::string tok;
        for (auto& u : s) {
            if (!(toks >> tok)) {
                throw ParseError(line_no, "a set needs exactly three elements");
            }
            u = to_int(tok, line_no);
        }
        if (toks >> tok) {
            throw ParseError(line_no, "a set needs exactly three elements");
        }
        inst.sets.push_back(s);
    }
    if (!have_n) {
        throw ParseError(line_no, "missing header 'n <int>'");
    }
    if (static_cast<int>(inst.sets.size()) != 3 * inst.n) {
        throw ParseError(line_no, "expected " + std::to_string(3 * inst.n) + " sets");
    }
    return inst;
}

std::string serialize_rx3c(const Rx3cInstance& inst) {
    std::ostringstream out;
    out << "n " << inst.n << '\n';
    for (std::size_t i = 0; i < inst.sets.size(); ++i) {
        out << 'S' << i + 1 << ':';
        for (int u : inst.sets[i]) {
            out << ' ' << u;
        }
        out << '\n';
    }
    return out.str();
}

Rx3cInstance read_rx3c_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DomainError("cannot open RX3C file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_rx3c(buf.str());
}

} // namespace approval
