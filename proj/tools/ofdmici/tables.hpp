#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace ofdmici::cli {

/// Result table with typed cells; CSV is the canonical rendering, JSON
/// an optional mirror. Non-finite numbers are rejected at insertion, so
/// no output ever carries a silent NaN; undefined cells are written as
/// the explicit marker "discarded" (null in JSON).
class Table {
public:
    explicit Table(std::vector<std::string> columns);

    class RowBuilder {
    public:
        RowBuilder& num(double value);       ///< throws on non-finite values
        RowBuilder& integer(std::int64_t value);
        RowBuilder& text(const std::string& value);
        RowBuilder& boolean(bool value);     ///< rendered as 0/1 in CSV
        RowBuilder& discarded();             ///< explicit marker cell
    private:
        friend class Table;
        explicit RowBuilder(Table& table) : table_(table) {}
        Table& table_;
        std::vector<nlohmann::json> cells_;
    };

    RowBuilder row() { return RowBuilder(*this); }
    void commit(RowBuilder& row);

    std::string to_csv() const;
    nlohmann::json to_json() const;

    std::size_t size() const { return rows_.size(); }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<nlohmann::json>> rows_;
};

/// Writes text to path, failing loudly on I/O errors.
void write_file(const std::string& path, const std::string& text);

} // namespace ofdmici::cli
