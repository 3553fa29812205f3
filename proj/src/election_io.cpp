#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "approval/election.hpp"
#include "approval/errors.hpp"

namespace approval {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') {
            ++j;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

std::int64_t parse_int(std::string_view tok, std::size_t line, const char* what) {
    std::int64_t value = 0;
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(line, std::string("expected integer ") + what + ", got '" + std::string(tok) + "'");
    }
    return value;
}

} // namespace

Election parse_election(std::string_view text) {
    int m = -1;
    std::vector<CandidateId> order;
    bool have_order = false;
    std::vector<VoterGroup> groups;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        const auto raw = text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (m < 0) {
            const auto toks = split_ws(line);
            if (toks.size() != 2 || toks[0] != "m") {
                throw ParseError(line_no, "expected header 'm <int>'");
            }
            const auto value = parse_int(toks[1], line_no, "candidate count");
            if (value < 1 || value > 1'000'000) {
                throw ParseError(line_no, "candidate count must be positive");
            }
            m = static_cast<int>(value);
            continue;
        }
        if (line.starts_with("order")) {
            if (have_order || !groups.empty()) {
                throw ParseError(line_no, "'order' must appear once, before voter lines");
            }
            const auto toks = split_ws(line.substr(5));
            if (toks.size() != static_cast<std::size_t>(m)) {
                throw ParseError(line_no, "tie order must list all " + std::to_string(m) + " candidates");
            }
            std::vector<bool> seen(static_cast<std::size_t>(m), false);
            for (auto tok : toks) {
                const auto c = parse_int(tok, line_no, "candidate index");
                if (c < 0 || c >= m || seen[static_cast<std::size_t>(c)]) {
                    throw ParseError(line_no, "tie order is not a permutation of 0..m-1");
                }
                seen[static_cast<std::size_t>(c)] = true;
                order.push_back(static_cast<CandidateId>(c));
            }
            have_order = true;
            continue;
        }

        const auto colon = line.find(':');
        if (colon == std::string_view::npos) {
            throw ParseError(line_no, "expected '<weight>: <indices>'");
        }
        VoterGroup g;
        g.weight = parse_int(trim(line.substr(0, colon)), line_no, "weight");
        if (g.weight < 1) {
            throw ParseError(line_no, "weight must be >= 1");
        }
        for (auto tok : split_ws(line.substr(colon + 1))) {
            const auto c = parse_int(tok, line_no, "candidate index");
            if (c < 0 || c >= m) {
                throw ParseError(line_no, "candidate index " + std::string(tok) + " out of range [0, " +
                                              std::to_string(m - 1) + "]");
            }
            g.approvals.push_back(static_cast<CandidateId>(c));
        }
        std::sort(g.approvals.begin(), g.approvals.end());
        if (std::adjacent_find(g.approvals.begin(), g.approvals.end()) != g.approvals.end()) {
            throw ParseError(line_no, "duplicate candidate index in approval set");
        }
        groups.push_back(std::move(g));
    }

    if (m < 0) {
        throw ParseError(line_no, "missing header 'm <int>'");
    }
    if (groups.empty()) {
        throw ParseError(line_no, "election has no voters");
    }
    TieOrder tie = have_order ? TieOrder(std::move(order)) : TieOrder::ascending(m);
    return Election(m, std::move(groups), std::move(tie));
}

std::string serialize_election(const Election& e) {
    std::ostringstream out;
    out << "m " << e.num_candidates() << '\n';
    if (!e.tie_order().is_ascending()) {
        out << "order";
        for (auto c : e.tie_order().order()) {
            out << ' ' << c;
        }
        out << '\n';
    }
    for (const auto& g : e.groups()) {
        out << g.weight << ':';
        for (auto c : g.approvals) {
            out << ' ' << c;
        }
        out << '\n';
    }
    return out.str();
}

Election read_election_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DomainError("cannot open election file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_election(buf.str());
}

void write_election_file(const Election& e, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DomainError("cannot write election file: " + path);
    }
    out << serialize_election(e);
}

} // namespace approval
