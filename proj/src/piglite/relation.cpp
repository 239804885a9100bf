#include "hitlog/piglite/relation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <regex>
#include <set>

namespace hitlog::pig {

ArityError::ArityError(std::size_t line_number, std::size_t expected, std::size_t found)
    : PigError("ArityError at line " + std::to_string(line_number) + ": expected " + std::to_string(expected) +
               " fields, found " + std::to_string(found)),
      line_number_(line_number) {}

std::string_view to_string(ColumnType t) {
    return t == ColumnType::Int ? "int" : "chararray";
}

std::optional<ColumnType> parse_column_type(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "chararray") return ColumnType::Chararray;
    if (lower == "int") return ColumnType::Int;
    return std::nullopt;
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].name == name) return i;
    }
    return std::nullopt;
}

std::size_t Schema::require(std::string_view name) const {
    if (auto i = index_of(name)) return *i;
    throw NoSuchColumn(std::string(name));
}

void validate_schema(const Schema& schema) {
    std::set<std::string_view> seen;
    for (const auto& c : schema.columns) {
        if (c.name.empty()) throw SchemaMismatch("empty column name");
        if (!seen.insert(c.name).second) throw SchemaMismatch("duplicate column '" + c.name + "'");
    }
}

std::string format_value(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    return std::get<std::string>(v);
}

namespace {

std::vector<fs::path> input_files(const fs::path& path) {
    if (!fs::is_directory(path)) {
        if (!fs::exists(path)) throw PigError("no such input: " + path.string());
        return {path};
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path)) {
        const auto name = e.path().filename().string();
        if (e.is_regular_file() && !name.empty() && name[0] != '.' && name[0] != '_') files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace

Relation load(const fs::path& path, std::string_view delimiter, const Schema& schema) {
    if (delimiter.empty()) throw PigError("load: empty delimiter");
    validate_schema(schema);
    Relation r{schema, {}};
    std::size_t line_number = 0;
    for (const auto& file : input_files(path)) {
        std::ifstream in(file, std::ios::binary);
        if (!in) throw PigError("cannot open " + file.string());
        std::string line;
        while (std::getline(in, line)) {
            ++line_number;
            std::vector<std::string_view> fields;
            std::string_view rest = line;
            while (true) {
                const auto pos = rest.find(delimiter);
                fields.push_back(rest.substr(0, pos));
                if (pos == std::string_view::npos) break;
                rest.remove_prefix(pos + delimiter.size());
            }
            if (fields.size() != schema.arity()) throw ArityError(line_number, schema.arity(), fields.size());
            Tuple t;
            t.reserve(fields.size());
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (schema.columns[i].type == ColumnType::Int) {
                    std::int64_t n = 0;
                    const auto f = fields[i];
                    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), n);
                    if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
                        throw TypeError("line " + std::to_string(line_number) + " column '" +
                                            schema.columns[i].name + "': '" + std::string(f) + "' is not an int",
                                        line_number, schema.columns[i].name);
                    }
                    t.emplace_back(n);
                } else {
                    t.emplace_back(std::string(fields[i]));
                }
            }
            r.tuples.push_back(std::move(t));
        }
    }
    return r;
}

Relation union_all(const Relation& a, const Relation& b) {
    return union_all(std::vector<const Relation*>{&a, &b});
}

Relation union_all(const std::vector<const Relation*>& inputs) {
    if (inputs.empty()) throw PigError("union of no relations");
    Relation out{inputs.front()->schema, {}};
    for (const Relation* r : inputs) {
        if (!(r->schema == out.schema)) throw SchemaMismatch("UNION inputs have different schemas");
        out.tuples.insert(out.tuples.end(), r->tuples.begin(), r->tuples.end());
    }
    return out;
}

Relation filter_matches(const Relation& r, std::string_view column, const std::string& pattern) {
    const auto idx = r.schema.require(column);
    if (r.schema.columns[idx].type != ColumnType::Chararray) {
        throw TypeError("MATCHES on non-chararray column '" + std::string(column) + "'");
    }
    std::regex re;
    try {
        re = std::regex(pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
        throw BadPattern("'" + pattern + "': " + e.what());
    }
    Relation out{r.schema, {}};
    for (const auto& t : r.tuples) {
        if (std::regex_match(std::get<std::string>(t[idx]), re)) out.tuples.push_back(t);
    }
    return out;
}

GroupedRelation group_by(const Relation& r, std::string_view column, std::string bag_name) {
    const auto idx = r.schema.require(column);
    GroupedRelation g;
    g.key_column = Column{"group", r.schema.columns[idx].type};
    g.bag_name = std::move(bag_name);
    g.bag_schema = r.schema;
    std::map<Value, std::size_t> slot;
    for (const auto& t : r.tuples) {
        auto [it, fresh] = slot.try_emplace(t[idx], g.groups.size());
        if (fresh) g.groups.push_back(Group{t[idx], {}});
        g.groups[it->second].bag.push_back(t);
    }
    return g;
}

Relation project(const Relation& r, const std::vector<std::string>& columns) {
    std::vector<std::size_t> idx;
    Relation out;
    for (const auto& c : columns) {
        idx.push_back(r.schema.require(c));
        out.schema.columns.push_back(r.schema.columns[idx.back()]);
    }
    validate_schema(out.schema);
    out.tuples.reserve(r.tuples.size());
    for (const auto& t : r.tuples) {
        Tuple p;
        p.reserve(idx.size());
        for (auto i : idx) p.push_back(t[i]);
        out.tuples.push_back(std::move(p));
    }
    return out;
}

Relation aggregate(const GroupedRelation& g, const std::vector<AggregateItem>& items) {
    if (items.empty()) throw PigError("GENERATE needs at least one item");
    Relation out;
    std::vector<std::size_t> sum_index(items.size(), 0);
    std::size_t sums = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& item = items[i];
        if (item.kind == AggregateItem::Kind::Group) {
            out.schema.columns.push_back(g.key_column);
            continue;
        }
        if (!g.bag_name.empty() && item.bag != g.bag_name) {
            throw NoSuchColumn(item.bag + "." + item.column + " (bag is '" + g.bag_name + "')");
        }
        sum_index[i] = g.bag_schema.require(item.column);
        if (g.bag_schema.columns[sum_index[i]].type != ColumnType::Int) {
            throw TypeError("SUM over chararray column '" + item.column + "'");
        }
        out.schema.columns.push_back(Column{sums == 0 ? "sum" : "sum_" + std::to_string(sums + 1), ColumnType::Int});
        ++sums;
    }
    validate_schema(out.schema);
    for (const auto& grp : g.groups) {
        Tuple t;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (items[i].kind == AggregateItem::Kind::Group) {
                t.push_back(grp.key);
                continue;
            }
            std::int64_t total = 0;
            for (const auto& row : grp.bag) {
                const auto v = std::get<std::int64_t>(row[sum_index[i]]);
                if ((v > 0 && total > std::numeric_limits<std::int64_t>::max() - v) ||
                    (v < 0 && total < std::numeric_limits<std::int64_t>::min() - v)) {
                    throw OverflowError("SUM(" + items[i].column + ") for group '" + format_value(grp.key) + "'");
                }
                total += v;
            }
            t.emplace_back(total);
        }
        out.tuples.push_back(std::move(t));
    }
    return out;
}

fs::path store(const Relation& r, const fs::path& dir, std::string_view delimiter, bool schema_flag) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw PigError("cannot create " + dir.string() + ": " + ec.message());
    const auto data_path = dir / "part-00000";
    {
        std::ofstream os(data_path, std::ios::binary | std::ios::trunc);
        for (const auto& t : r.tuples) {
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (i) os << delimiter;
                os << format_value(t[i]);
            }
            os << '\n';
        }
        if (!os) throw PigError("write failure: " + data_path.string());
    }
    const auto schema_path = dir / ".schema";
    if (schema_flag) {
        std::ofstream os(schema_path, std::ios::binary | std::ios::trunc);
        for (const auto& c : r.schema.columns) os << c.name << ':' << to_string(c.type) << '\n';
        if (!os) throw PigError("write failure: " + schema_path.string());
    } else {
        fs::remove(schema_path, ec);
    }
    return data_path;
}

}  // namespace hitlog::pig
