#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fastharq::app {

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Column {
    std::string name;
    std::string unit;  ///< cu, npcu, dB, probability, ...

    std::string header() const { return unit.empty() ? name : name + "[" + unit + "]"; }
};

/// Rows of named cells; columns appear in first-use order and missing cells stay empty.
class Table {
public:
    using Row = std::vector<std::pair<Column, Cell>>;

    void add_row(const Row& row);
    void append(const Table& other);

    const std::vector<Column>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    /// Cell by column name; monostate when absent.
    const Cell& at(std::size_t row, const std::string& name) const;

    void write_csv(std::ostream& out) const;
    void write_json(std::ostream& out) const;

private:
    std::size_t column_index(const Column& c);
    std::vector<Column> columns_;
    std::vector<std::vector<Cell>> rows_;
};

/// Shortest round-trip decimal form ("%.17g" trimmed), so output is bit-reproducible.
std::string format_number(double v);

}  // namespace fastharq::app
