#include "tables.hpp"

#include <cmath>
#include <fstream>

#include "ofdmici/error.hpp"

namespace ofdmici::cli {

using nlohmann::json;

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

Table::RowBuilder& Table::RowBuilder::num(double value) {
    if (!std::isfinite(value)) {
        throw Error("internal: non-finite value for column '" +
                    table_.columns_.at(cells_.size()) + "'");
    }
    cells_.emplace_back(value);
    return *this;
}

Table::RowBuilder& Table::RowBuilder::integer(std::int64_t value) {
    cells_.emplace_back(value);
    return *this;
}

Table::RowBuilder& Table::RowBuilder::text(const std::string& value) {
    if (value.find(',') != std::string::npos || value.find('\n') != std::string::npos) {
        throw Error("internal: text cell may not contain commas or newlines");
    }
    cells_.emplace_back(value);
    return *this;
}

Table::RowBuilder& Table::RowBuilder::boolean(bool value) {
    cells_.emplace_back(value);
    return *this;
}

Table::RowBuilder& Table::RowBuilder::discarded() {
    cells_.emplace_back(nullptr);
    return *this;
}

void Table::commit(RowBuilder& row) {
    if (row.cells_.size() != columns_.size()) {
        throw Error("internal: row has " + std::to_string(row.cells_.size()) + " cells, table '" +
                    (columns_.empty() ? "" : columns_.front()) + "...' has " +
                    std::to_string(columns_.size()) + " columns");
    }
    rows_.push_back(std::move(row.cells_));
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (c) out += ',';
        out += columns_[c];
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            const json& cell = row[c];
            if (cell.is_null()) {
                out += "discarded";
            } else if (cell.is_string()) {
                out += cell.get<std::string>();
            } else if (cell.is_boolean()) {
                out += cell.get<bool>() ? '1' : '0';
            } else {
                out += cell.dump(); // shortest round-trip number rendering
            }
        }
        out += '\n';
    }
    return out;
}

json Table::to_json() const {
    json rows = json::array();
    for (const auto& row : rows_) {
        json obj = json::object();
        for (std::size_t c = 0; c < row.size(); ++c) obj[columns_[c]] = row[c];
        rows.push_back(std::move(obj));
    }
    return rows;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw Error("failed writing '" + path + "'");
}

} // namespace ofdmici::cli
