#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "approval/errors.hpp"
#include "approval/experiments.hpp"

namespace approval {

namespace {

constexpr std::string_view kHeader = "rule,op,p,phi,level,num_elections,frac_changed,avg_replaced,std_replaced,seed";

std::string fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ',')) {
        out.push_back(cur);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double field_double(const std::string& s, std::size_t row) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (s.empty() || used != s.size()) {
        throw ParseError(row, "bad number '" + s + "'");
    }
    return v;
}

std::uint64_t field_u64(const std::string& s, std::size_t row) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        if (!s.empty() && s.front() != '-') {
            v = std::stoull(s, &used);
        }
    } catch (const std::exception&) {
        used = 0;
    }
    if (s.empty() || used != s.size()) {
        throw ParseError(row, "bad integer '" + s + "'");
    }
    return v;
}

} // namespace

std::string records_to_csv(std::vector<ExperimentRecord> records) {
    std::stable_sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
        return std::tie(a.rule, a.op, a.p, a.phi, a.level) < std::tie(b.rule, b.op, b.p, b.phi, b.level);
    });
    std::ostringstream out;
    out << kHeader << '\n';
    for (const auto& r : records) {
        out << to_string(r.rule) << ',' << to_string(r.op) << ',' << fixed6(r.p) << ',' << fixed6(r.phi) << ','
            << fixed6(r.level) << ',' << r.num_elections << ',' << fixed6(r.frac_changed) << ','
            << fixed6(r.avg_replaced) << ',' << fixed6(r.std_replaced) << ',' << r.seed << '\n';
    }
    return out.str();
}

std::vector<ExperimentRecord> parse_records_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    // Row numbers count file lines; the header is row 1.
    std::size_t row = 1;
    if (!std::getline(in, line)) {
        throw ParseError(row, "missing header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kHeader) {
        throw ParseError(row, "unexpected header");
    }
    std::vector<ExperimentRecord> records;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 10) {
            throw ParseError(row, "expected 10 fields, got " + std::to_string(f.size()));
        }
        ExperimentRecord r;
        try {
            r.rule = parse_rule(f[0]);
            r.op = parse_edit_kind(f[1]);
        } catch (const DomainError& err) {
            throw ParseError(row, err.what());
        }
        r.p = field_double(f[2], row);
        r.phi = field_double(f[3], row);
        r.level = field_double(f[4], row);
        const auto num = field_u64(f[5], row);
        if (num > static_cast<std::uint64_t>(INT32_MAX)) {
            throw ParseError(row, "num_elections out of range");
        }
        r.num_elections = static_cast<int>(num);
        r.frac_changed = field_double(f[6], row);
        r.avg_replaced = field_double(f[7], row);
        r.std_replaced = field_double(f[8], row);
        r.seed = field_u64(f[9], row);
        records.push_back(r);
    }
    return records;
}

void write_records_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DomainError("cannot write CSV: " + path);
    }
    out << records_to_csv(records);
}

std::vector<ExperimentRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DomainError("cannot open CSV: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_records_csv(buf.str());
}

} // namespace approval
