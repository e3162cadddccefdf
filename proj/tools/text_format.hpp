#pragma once

// Key/value spec files, round-trip number formatting and CSV helpers.

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <dualprox/errors.hpp>
#include <dualprox/core.hpp>

namespace dualprox::cli {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

/// Shortest text that parses back to the same double, capped at 17 significant digits.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "NA";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

inline double parse_double(std::string_view text, std::string_view what) {
    const auto s = trim(text);
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "NA" || s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    const auto res = std::from_chars(first, s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ArgumentError("malformed number for " + std::string(what) + ": '" + std::string(s) + "'");
    return v;
}

inline long parse_long(std::string_view text, std::string_view what) {
    const auto s = trim(text);
    long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ArgumentError("malformed integer for " + std::string(what) + ": '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

inline Vector parse_vector(std::string_view text, std::string_view what) {
    const auto s = trim(text);
    if (s.empty()) throw ArgumentError("empty vector for " + std::string(what));
    const auto parts = split(s, ',');
    Vector v(static_cast<Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Index>(i)] = parse_double(parts[i], what);
    return v;
}

/// Rows separated by ';', entries by ','.
inline Matrix parse_matrix(std::string_view text, std::string_view what) {
    const auto rows = split(trim(text), ';');
    std::vector<Vector> parsed;
    for (auto r : rows) parsed.push_back(parse_vector(r, what));
    const Index cols = parsed.front().size();
    Matrix m(static_cast<Index>(parsed.size()), cols);
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        if (parsed[i].size() != cols) throw ArgumentError("ragged matrix for " + std::string(what));
        m.row(static_cast<Index>(i)) = parsed[i].transpose();
    }
    return m;
}

inline std::string format_vector(const Vector& v) {
    std::string out;
    for (Index i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

/// `key = value` lines, `#` starts a comment. Keys are unique.
class KeyValues {
public:
    static KeyValues parse(std::istream& in) {
        KeyValues kv;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string_view s = line;
            if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
            s = trim(s);
            if (s.empty()) continue;
            const auto eq = s.find('=');
            if (eq == std::string_view::npos)
                throw ArgumentError("line " + std::to_string(lineno) + ": expected 'key = value'");
            std::string key(trim(s.substr(0, eq)));
            std::string value(trim(s.substr(eq + 1)));
            if (key.empty()) throw ArgumentError("line " + std::to_string(lineno) + ": empty key");
            if (kv.values_.count(key)) throw ArgumentError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
            kv.values_.emplace(std::move(key), std::move(value));
        }
        return kv;
    }

    static KeyValues parse_text(const std::string& text) {
        std::istringstream in(text);
        return parse(in);
    }

    static KeyValues load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ArgumentError("cannot open '" + path + "'");
        return parse(in);
    }

    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }

    [[nodiscard]] std::optional<std::string> get(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    [[nodiscard]] std::string require(const std::string& key) const {
        auto v = get(key);
        if (!v) throw ArgumentError("missing key '" + key + "'");
        return *v;
    }

    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

    [[nodiscard]] const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// A parsed CSV table with a header row; cells kept as text.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::optional<std::size_t> column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        return std::nullopt;
    }
};

inline CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        for (auto c : split(line, ',')) cells.emplace_back(c);
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != t.header.size()) throw ArgumentError("CSV row width differs from header");
            t.rows.push_back(std::move(cells));
        }
    }
    if (first) throw ArgumentError("CSV has no header");
    return t;
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open '" + path + "'");
    return read_csv(in);
}

}  // namespace dualprox::cli
