#pragma once

// CSV / JSON emission and the matching readers. Every floating value is
// written with 17 significant digits, which round-trips doubles exactly.

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrw/absorption.hpp"
#include "qrw/error.hpp"
#include "qrw/walk.hpp"

namespace qrw::io {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline void write_csv(std::ostream& out, const CsvTable& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i)
        out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

inline CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV input");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) break;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw ParseError(cell);
            } catch (const std::exception&) {
                throw ParseError("bad CSV cell '" + cell + "'");
            }
        }
        if (row.size() != table.header.size()) throw ParseError("CSV row width mismatch");
        table.rows.push_back(std::move(row));
    }
    return table;
}

// Rows in increasing k; sites whose amplitudes are both exactly zero are omitted.
inline CsvTable distribution_table(const AmplitudeField& field) {
    CsvTable table{{"k", "prob", "psiL_re", "psiL_im", "psiR_re", "psiR_im"}, {}};
    for (int k = field.min_site(); k <= field.max_site(); ++k) {
        const Spinor v = field.at(k);
        if (v.is_zero()) continue;
        table.rows.push_back({double(k), v.norm2(), v.left.real(), v.left.imag(), v.right.real(),
                              v.right.imag()});
    }
    return table;
}

inline nlohmann::json distribution_json(const AmplitudeField& field, const std::string& coin_spec,
                                        const std::string& state_spec) {
    nlohmann::json doc;
    doc["time"] = field.time();
    doc["walk_type"] = to_string(field.walk_type());
    doc["coin"] = coin_spec;
    doc["state"] = state_spec;
    doc["entries"] = nlohmann::json::array();
    for (const auto& row : distribution_table(field).rows) {
        nlohmann::json entry = nlohmann::json::array();
        entry.push_back(static_cast<long long>(row[0]));
        for (std::size_t i = 1; i < row.size(); ++i) entry.push_back(row[i]);
        doc["entries"].push_back(std::move(entry));
    }
    return doc;
}

// Inverse of distribution_json's entries array, as CSV-shaped rows.
inline CsvTable distribution_from_json(const nlohmann::json& doc) {
    CsvTable table{{"k", "prob", "psiL_re", "psiL_im", "psiR_re", "psiR_im"}, {}};
    for (const auto& entry : doc.at("entries")) {
        std::vector<double> row;
        for (const auto& v : entry) row.push_back(v.get<double>());
        if (row.size() != 6) throw ParseError("distribution entry must have 6 fields");
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline CsvTable series_table(const HittingSeries& series, const QubitState& state) {
    CsvTable table{{"n", "P_n", "p_re", "p_im", "r_re", "r_im"}, {}};
    for (int n = 1; n <= series.n_max; ++n) {
        table.rows.push_back({double(n), first_hit_prob(series, state, n), series.p[n].real(),
                              series.p[n].imag(), series.r[n].real(), series.r[n].imag()});
    }
    return table;
}

// JSON text with 17-significant-digit floats (nlohmann's default writer
// emits the shortest round-trip form, which we avoid for uniformity with CSV).
inline void write_json(std::ostream& out, const nlohmann::json& doc, int indent = 2,
                       int depth = 0) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (doc.type()) {
        case nlohmann::json::value_t::object: {
            if (doc.empty()) {
                out << "{}";
                break;
            }
            out << "{\n";
            bool first = true;
            for (auto it = doc.begin(); it != doc.end(); ++it) {
                if (!first) out << ",\n";
                first = false;
                out << pad << nlohmann::json(it.key()).dump() << ": ";
                write_json(out, it.value(), indent, depth + 1);
            }
            out << '\n' << close_pad << '}';
            break;
        }
        case nlohmann::json::value_t::array: {
            // Arrays of scalars stay on one line.
            bool scalar = true;
            for (const auto& v : doc) scalar = scalar && !v.is_structured();
            out << '[';
            bool first = true;
            for (const auto& v : doc) {
                if (!first) out << (scalar ? ", " : ",");
                first = false;
                if (!scalar) out << '\n' << pad;
                write_json(out, v, indent, depth + 1);
            }
            if (!scalar && !doc.empty()) out << '\n' << close_pad;
            out << ']';
            break;
        }
        case nlohmann::json::value_t::number_float: {
            const double v = doc.get<double>();
            if (std::isfinite(v))
                out << format_double(v);
            else
                out << "null";
            break;
        }
        default:
            out << doc.dump();
    }
    if (depth == 0) out << '\n';
}

}  // namespace qrw::io
