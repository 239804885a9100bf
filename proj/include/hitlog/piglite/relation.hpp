#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hitlog::pig {

namespace fs = std::filesystem;

class PigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArityError : public PigError {
public:
    ArityError(std::size_t line_number, std::size_t expected, std::size_t found);
    std::size_t line_number() const { return line_number_; }

private:
    std::size_t line_number_;
};

/// Int coercion failures on load (line/column set) and SUM over chararray.
class TypeError : public PigError {
public:
    explicit TypeError(const std::string& message, std::size_t line_number = 0, std::string column = {})
        : PigError("TypeError: " + message), line_number_(line_number), column_(std::move(column)) {}
    std::size_t line_number() const { return line_number_; }
    const std::string& column() const { return column_; }

private:
    std::size_t line_number_;
    std::string column_;
};

class NoSuchColumn : public PigError {
public:
    explicit NoSuchColumn(const std::string& column) : PigError("NoSuchColumn: " + column), column_(column) {}
    const std::string& column() const { return column_; }

private:
    std::string column_;
};

class SchemaMismatch : public PigError {
public:
    explicit SchemaMismatch(const std::string& m) : PigError("SchemaMismatch: " + m) {}
};

class BadPattern : public PigError {
public:
    explicit BadPattern(const std::string& m) : PigError("BadPattern: " + m) {}
};

class OverflowError : public PigError {
public:
    explicit OverflowError(const std::string& m) : PigError("OverflowError: " + m) {}
};

enum class ColumnType { Chararray, Int };

std::string_view to_string(ColumnType t);
std::optional<ColumnType> parse_column_type(std::string_view name);

struct Column {
    std::string name;
    ColumnType type = ColumnType::Chararray;

    friend bool operator==(const Column&, const Column&) = default;
};

struct Schema {
    std::vector<Column> columns;

    std::size_t arity() const { return columns.size(); }
    std::optional<std::size_t> index_of(std::string_view name) const;
    /// Like index_of but throws NoSuchColumn.
    std::size_t require(std::string_view name) const;

    friend bool operator==(const Schema&, const Schema&) = default;
};

/// Throws SchemaMismatch on empty or duplicate column names.
void validate_schema(const Schema& schema);

using Value = std::variant<std::int64_t, std::string>;
using Tuple = std::vector<Value>;

std::string format_value(const Value& v);

struct Relation {
    Schema schema;
    std::vector<Tuple> tuples;

    friend bool operator==(const Relation&, const Relation&) = default;
};

struct Group {
    Value key;
    std::vector<Tuple> bag;

    friend bool operator==(const Group&, const Group&) = default;
};

/// Result of GROUP: one entry per distinct key in first-occurrence order.
/// `bag_name` is the alias of the grouped input, used as SUM(bag_name.col).
struct GroupedRelation {
    Column key_column;
    std::string bag_name;
    Schema bag_schema;
    std::vector<Group> groups;

    friend bool operator==(const GroupedRelation&, const GroupedRelation&) = default;
};

/// Reads delimiter-separated lines. A directory loads all of its visible
/// files (names not starting with '.' or '_') in name order.
Relation load(const fs::path& path, std::string_view delimiter, const Schema& schema);

Relation union_all(const Relation& a, const Relation& b);
Relation union_all(const std::vector<const Relation*>& inputs);

/// Keeps tuples whose `column` matches `pattern` as a whole string.
Relation filter_matches(const Relation& r, std::string_view column, const std::string& pattern);

GroupedRelation group_by(const Relation& r, std::string_view column, std::string bag_name = {});

Relation project(const Relation& r, const std::vector<std::string>& columns);

struct AggregateItem {
    enum class Kind { Group, Sum };
    Kind kind = Kind::Group;
    std::string bag;     // Sum only
    std::string column;  // Sum only

    friend bool operator==(const AggregateItem&, const AggregateItem&) = default;
};

/// FOREACH over a grouped relation: `group` yields the key, SUM(bag.col)
/// the 64-bit sum of an int column over each bag.
Relation aggregate(const GroupedRelation& g, const std::vector<AggregateItem>& items);

/// Writes <dir>/part-00000 and, with `schema_flag`, <dir>/.schema holding one
/// `name:type` line per column. Returns the data file path.
fs::path store(const Relation& r, const fs::path& dir, std::string_view delimiter, bool schema_flag);

}  // namespace hitlog::pig
