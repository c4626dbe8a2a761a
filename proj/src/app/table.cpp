#include "fastharq/app/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <json.hpp>

namespace fastharq::app {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    for (int precision = 12; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::size_t Table::column_index(const Column& c) {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].name == c.name) return i;
    }
    columns_.push_back(c);
    for (auto& r : rows_) r.emplace_back();
    return columns_.size() - 1;
}

void Table::add_row(const Row& row) {
    std::vector<std::size_t> idx;
    for (const auto& [col, cell] : row) idx.push_back(column_index(col));
    std::vector<Cell> cells(columns_.size());
    for (std::size_t i = 0; i < row.size(); ++i) cells[idx[i]] = row[i].second;
    rows_.push_back(std::move(cells));
}

void Table::append(const Table& other) {
    for (const auto& r : other.rows_) {
        Row row;
        for (std::size_t i = 0; i < other.columns_.size(); ++i) {
            if (!std::holds_alternative<std::monostate>(r[i])) row.emplace_back(other.columns_[i], r[i]);
        }
        add_row(row);
    }
    for (const auto& c : other.columns_) column_index(c);
}

const Cell& Table::at(std::size_t row, const std::string& name) const {
    static const Cell empty;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].name == name) return rows_.at(row)[i];
    }
    return empty;
}

namespace {

std::string csv_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    if (const auto* s = std::get_if<std::string>(&c)) {
        if (s->find_first_of(",\"\n") == std::string::npos) return *s;
        std::string q = "\"";
        for (char ch : *s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }
    return "";
}

}  // namespace

void Table::write_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i].header();
    out << "\n";
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_cell(r[i]);
        out << "\n";
    }
}

void Table::write_json(std::ostream& out) const {
    using nlohmann::ordered_json;
    ordered_json j;
    j["columns"] = ordered_json::array();
    for (const auto& c : columns_) j["columns"].push_back({{"name", c.name}, {"unit", c.unit}});
    j["rows"] = ordered_json::array();
    for (const auto& r : rows_) {
        ordered_json row = ordered_json::object();
        for (std::size_t i = 0; i < r.size(); ++i) {
            const auto& cell = r[i];
            auto& v = row[columns_[i].name];
            if (const auto* d = std::get_if<double>(&cell)) {
                v = std::isfinite(*d) ? ordered_json(*d) : ordered_json(format_number(*d));
            } else if (const auto* n = std::get_if<long long>(&cell)) {
                v = *n;
            } else if (const auto* s = std::get_if<std::string>(&cell)) {
                v = *s;
            } else {
                v = nullptr;
            }
        }
        j["rows"].push_back(std::move(row));
    }
    out << j.dump(2) << "\n";
}

}  // namespace fastharq::app
