// SPDX-License-Identifier: MIT
/**
 * @file report.hpp
 * @brief Run artifacts and their CSV / JSON encodings.
 */

#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace thetaexp::report {

using Cell = std::variant<std::int64_t, double, std::string, bool>;
using Json = nlohmann::ordered_json;

struct RunArtifact {
    Json config = Json::object();
    Json meta = Json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

/// %.12g: at most 12 significant digits, trailing zeros dropped.
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

inline std::string cell_text(const Cell& c) {
    struct Visitor {
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_real(v); }
        std::string operator()(const std::string& v) const { return csv_field(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
    };
    return std::visit(Visitor{}, c);
}

inline Json cell_json(const Cell& c) {
    return std::visit([](const auto& v) { return Json(v); }, c);
}

inline void write_csv(const RunArtifact& a, std::ostream& os) {
    for (std::size_t i = 0; i < a.columns.size(); ++i) {
        os << (i ? "," : "") << csv_field(a.columns[i]);
    }
    os << '\n';
    for (const auto& row : a.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << cell_text(row[i]);
        }
        os << '\n';
    }
}

inline Json to_json(const RunArtifact& a) {
    Json out = Json::object();
    out["config"] = a.config;
    out["meta"] = a.meta;
    Json rows = Json::array();
    for (const auto& row : a.rows) {
        Json obj = Json::object();
        for (std::size_t i = 0; i < row.size() && i < a.columns.size(); ++i) {
            obj[a.columns[i]] = cell_json(row[i]);
        }
        rows.push_back(std::move(obj));
    }
    out["rows"] = std::move(rows);
    return out;
}

inline void write_json(const RunArtifact& a, std::ostream& os) {
    os << to_json(a).dump(2) << '\n';
}

inline std::string render(const RunArtifact& a, const std::string& format) {
    std::ostringstream os;
    if (format == "json") {
        write_json(a, os);
    } else {
        write_csv(a, os);
    }
    return os.str();
}

}  // namespace thetaexp::report
