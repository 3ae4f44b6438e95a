// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace opbayes::io {

inline std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

/// Parse a real number; simple fractions like "2/3" are accepted.
inline double parse_real(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw std::runtime_error("expected a number, got an empty field");
    const std::size_t slash = t.find('/');
    auto as_double = [](const std::string& s) {
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw std::runtime_error("not a number: '" + s + "'");
        }
        if (pos != s.size()) throw std::runtime_error("not a number: '" + s + "'");
        return v;
    };
    if (slash == std::string::npos) return as_double(t);
    const double num = as_double(trim(t.substr(0, slash)));
    const double den = as_double(trim(t.substr(slash + 1)));
    if (den == 0.0) throw std::runtime_error("division by zero in '" + t + "'");
    return num / den;
}

inline long parse_count(const std::string& text, const std::string& where) {
    const std::string t = trim(text);
    std::size_t pos = 0;
    long v;
    try {
        v = std::stol(t, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error(where + ": expected a non-negative integer, got '" + t + "'");
    }
    if (pos != t.size() || v < 0)
        throw std::runtime_error(where + ": expected a non-negative integer, got '" + t + "'");
    return v;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

// Reads a two-column CSV with a mandatory header naming exactly the expected
// columns; returns the second column, reporting 1-based line numbers on error.
template <class Parse>
inline auto read_two_column_csv(std::istream& in, const std::string& name,
                                const std::string& col0, const std::string& col1, Parse parse) {
    using value_type = decltype(parse(std::string{}, std::string{}));
    std::vector<value_type> out;
    std::string line;
    std::size_t lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto fields = split_csv_line(t);
        if (!saw_header) {
            if (fields.size() != 2 || fields[0] != col0 || fields[1] != col1)
                throw std::runtime_error(name + ":" + std::to_string(lineno) +
                                         ": expected header '" + col0 + "," + col1 + "'");
            saw_header = true;
            continue;
        }
        if (fields.size() != 2)
            throw std::runtime_error(name + ":" + std::to_string(lineno) +
                                     ": expected two comma-separated fields");
        try {
            out.push_back(parse(fields[0], fields[1]));
        } catch (const std::exception& e) {
            throw std::runtime_error(name + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!saw_header)
        throw std::runtime_error(name + ": missing header row '" + col0 + "," + col1 + "'");
    return out;
}

}  // namespace detail

/// Annual counts: CSV `year,count`.
inline std::vector<int> read_counts_csv(std::istream& in, const std::string& name = "counts") {
    return detail::read_two_column_csv(in, name, "year", "count",
                                       [](const std::string&, const std::string& v) {
                                           const long n = parse_count(v, "count");
                                           if (n > 1000000000L)
                                               throw std::runtime_error(
                                                   "count: implausibly large value");
                                           return static_cast<int>(n);
                                       });
}

/// Loss severities: CSV `index,severity`.
inline std::vector<double> read_losses_csv(std::istream& in, const std::string& name = "losses") {
    return detail::read_two_column_csv(in, name, "index", "severity",
                                       [](const std::string&, const std::string& v) {
                                           return parse_real(v);
                                       });
}

/// Expert opinions: CSV `expert_id,opinion`.
inline std::vector<double> read_experts_csv(std::istream& in, const std::string& name = "experts") {
    return detail::read_two_column_csv(in, name, "expert_id", "opinion",
                                       [](const std::string&, const std::string& v) {
                                           return parse_real(v);
                                       });
}

/// Industry samples: CSV `index,value`.
inline std::vector<double> read_samples_csv(std::istream& in, const std::string& name = "samples") {
    return detail::read_two_column_csv(in, name, "index", "value",
                                       [](const std::string&, const std::string& v) {
                                           return parse_real(v);
                                       });
}

/// Flat key=value configuration ('#' starts a comment line).
inline std::map<std::string, std::string> read_config(std::istream& in,
                                                      const std::string& name = "config") {
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(name + ":" + std::to_string(lineno) +
                                     ": expected key=value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error(name + ":" + std::to_string(lineno) + ": empty key");
        if (!out.emplace(key, value).second)
            throw std::runtime_error(name + ":" + std::to_string(lineno) + ": duplicate key '" +
                                     key + "'");
    }
    return out;
}

template <class Reader>
inline auto read_file(const std::string& path, Reader reader) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return reader(in, path);
}

}  // namespace opbayes::io
