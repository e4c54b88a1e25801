#pragma once

#include <map>
#include <string>
#include <vector>

#include "forecast/types.hpp"

namespace traffic::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 if absent
};

Table read_file(const std::string& path);

/// `year,value` series, UTF-8, '.' decimal separator.
std::map<int, double> read_year_series(const std::string& path);

/// `hour,inbound,outbound`, 24 rows, hours 0-23.
void read_hourly_pair(const std::string& path, HourlyProfile& inbound, HourlyProfile& outbound);

/// `hour,share`, 24 rows, shares summing to 1 within tol.
HourlyProfile read_share_profile(const std::string& path, double tol = 1e-6);

double parse_number(const std::string& s, const std::string& context);

/// Stable shortest-roundtrip formatting so reruns are byte-identical.
std::string format_number(double v);

} // namespace traffic::csv
