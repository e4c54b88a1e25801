#include "forecast/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace traffic::csv {

int Table::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

static std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_line(line);
        if (first) {
            t.header = cells;
            first = false;
        } else {
            t.rows.push_back(cells);
        }
    }
    if (first) throw IoError("empty csv: " + path);
    return t;
}

double parse_number(const std::string& s, const std::string& context) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw IoError("bad number '" + s + "' in " + context);
    return v;
}

std::map<int, double> read_year_series(const std::string& path) {
    Table t = read_file(path);
    int cy = t.column("year"), cv = t.column("value");
    if (cy < 0 || cv < 0) throw IoError(path + ": expected header year,value");
    std::map<int, double> out;
    for (const auto& r : t.rows) {
        int y = static_cast<int>(parse_number(r[static_cast<size_t>(cy)], path));
        out[y] = parse_number(r[static_cast<size_t>(cv)], path);
    }
    return out;
}

void read_hourly_pair(const std::string& path, HourlyProfile& inbound, HourlyProfile& outbound) {
    Table t = read_file(path);
    int ch = t.column("hour"), ci = t.column("inbound"), co = t.column("outbound");
    if (ch < 0 || ci < 0 || co < 0) throw IoError(path + ": expected header hour,inbound,outbound");
    if (t.rows.size() != 24) throw IoError(path + ": expected 24 rows");
    std::array<bool, 24> seen{};
    for (const auto& r : t.rows) {
        int h = static_cast<int>(parse_number(r[static_cast<size_t>(ch)], path));
        if (h < 0 || h > 23) throw IoError(path + ": hour out of range");
        seen[static_cast<size_t>(h)] = true;
        inbound[h] = parse_number(r[static_cast<size_t>(ci)], path);
        outbound[h] = parse_number(r[static_cast<size_t>(co)], path);
        if (inbound[h] < 0 || outbound[h] < 0) throw IoError(path + ": negative count");
    }
    for (bool s : seen)
        if (!s) throw IoError(path + ": missing hour row");
}

HourlyProfile read_share_profile(const std::string& path, double tol) {
    Table t = read_file(path);
    int ch = t.column("hour"), cs = t.column("share");
    if (ch < 0 || cs < 0) throw IoError(path + ": expected header hour,share");
    if (t.rows.size() != 24) throw IoError(path + ": expected 24 rows");
    HourlyProfile p;
    for (const auto& r : t.rows) {
        int h = static_cast<int>(parse_number(r[static_cast<size_t>(ch)], path));
        if (h < 0 || h > 23) throw IoError(path + ": hour out of range");
        p[h] = parse_number(r[static_cast<size_t>(cs)], path);
        if (p[h] < 0) throw IoError(path + ": negative share");
    }
    if (std::abs(p.sum() - 1.0) > tol)
        throw ValidationError(path + ": shares sum to " + format_number(p.sum()) + ", expected 1");
    return p;
}

std::string format_number(double v) {
    if (v == static_cast<long long>(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
        return buf;
    }
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) break;
    }
    return buf;
}

} // namespace traffic::csv
