#include "hitlog/piglite/syntax.hpp"

#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

namespace hitlog::pig {

namespace {

constexpr std::array<std::pair<Keyword, std::string_view>, 13> kKeywords = {{
    {Keyword::Load, "LOAD"},
    {Keyword::Using, "USING"},
    {Keyword::As, "AS"},
    {Keyword::Union, "UNION"},
    {Keyword::Filter, "FILTER"},
    {Keyword::By, "BY"},
    {Keyword::Matches, "MATCHES"},
    {Keyword::Foreach, "FOREACH"},
    {Keyword::Generate, "GENERATE"},
    {Keyword::Group, "GROUP"},
    {Keyword::Store, "STORE"},
    {Keyword::Into, "INTO"},
    {Keyword::Sum, "SUM"},
}};

std::optional<Keyword> keyword_of(std::string_view word) {
    std::string upper(word);
    for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (const auto& [kw, name] : kKeywords) {
        if (name == upper) return kw;
    }
    return std::nullopt;
}

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

std::string_view to_string(Keyword kw) {
    for (const auto& [k, name] : kKeywords) {
        if (k == kw) return name;
    }
    return "?";
}

std::string describe(const Token& t) {
    switch (t.kind) {
        case TokenKind::Identifier: return "identifier '" + t.text + "'";
        case TokenKind::Keyword: return std::string(to_string(t.keyword));
        case TokenKind::String: return "string " + quote(t.text);
        default: return "'" + t.text + "'";
    }
}

LexError::LexError(std::size_t line, std::size_t column, std::string found)
    : PigError("LexError at " + std::to_string(line) + ":" + std::to_string(column) + ": unexpected " + found),
      line_(line),
      column_(column),
      found_(std::move(found)) {}

ParseError::ParseError(std::size_t line, std::size_t column, std::string expected, std::string found)
    : PigError("ParseError at " + std::to_string(line) + ":" + std::to_string(column) + ": expected " + expected +
               ", found " + found),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

UnboundRelation::UnboundRelation(std::string name, std::size_t statement_index)
    : PigError("UnboundRelation: '" + name + "' used in statement " + std::to_string(statement_index) +
               " before it is defined"),
      name_(std::move(name)),
      statement_index_(statement_index) {}

// ---------------------------------------------------------------------------
// Lexer

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t n = 1) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };

    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        if (src.substr(i, 2) == "--") {
            while (i < src.size() && src[i] != '\n') advance();
            continue;
        }
        if (src.substr(i, 2) == "/*") {
            const auto start_line = line, start_col = col;
            const auto end = src.find("*/", i + 2);
            if (end == std::string_view::npos) throw LexError(start_line, start_col, "unterminated comment");
            advance(end + 2 - i);
            continue;
        }

        Token tok{TokenKind::Identifier, {}, Keyword::Load, line, col};
        if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && is_ident_char(src[j])) ++j;
            tok.text = std::string(src.substr(i, j - i));
            if (auto kw = keyword_of(tok.text)) {
                tok.kind = TokenKind::Keyword;
                tok.keyword = *kw;
            }
            advance(j - i);
        } else if (c == '\'') {
            tok.kind = TokenKind::String;
            advance();
            while (true) {
                if (i >= src.size() || src[i] == '\n') throw LexError(tok.line, tok.column, "unterminated string");
                const char s = src[i];
                if (s == '\'') {
                    advance();
                    break;
                }
                if (s == '\\') {
                    if (i + 1 >= src.size()) throw LexError(line, col, "unterminated string");
                    const char e = src[i + 1];
                    switch (e) {
                        case 't': tok.text += '\t'; break;
                        case 'n': tok.text += '\n'; break;
                        case '\\': tok.text += '\\'; break;
                        case '\'': tok.text += '\''; break;
                        default:
                            // Unknown escapes are kept verbatim so regex escapes like '\.' survive.
                            tok.text += '\\';
                            tok.text += e;
                    }
                    advance(2);
                    continue;
                }
                tok.text += s;
                advance();
            }
        } else {
            switch (c) {
                case '=': tok.kind = TokenKind::Equals; break;
                case '(': tok.kind = TokenKind::LParen; break;
                case ')': tok.kind = TokenKind::RParen; break;
                case ',': tok.kind = TokenKind::Comma; break;
                case ';': tok.kind = TokenKind::Semicolon; break;
                case ':': tok.kind = TokenKind::Colon; break;
                case '.': tok.kind = TokenKind::Dot; break;
                default: throw LexError(line, col, "'" + std::string(1, c) + "'");
            }
            tok.text = std::string(1, c);
            advance();
        }
        out.push_back(std::move(tok));
    }
    return out;
}

// ---------------------------------------------------------------------------
// AST helpers

std::vector<std::string> inputs_of(const Operation& op) {
    return std::visit(
        [](const auto& s) -> std::vector<std::string> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, LoadStmt>) {
                return {};
            } else if constexpr (std::is_same_v<T, UnionStmt>) {
                return s.inputs;
            } else {
                return {s.source};
            }
        },
        op);
}

std::string_view operation_name(const Operation& op) {
    static constexpr std::array<std::string_view, 7> kNames = {"LOAD",    "UNION",   "FILTER", "FOREACH",
                                                               "FOREACH", "GROUP",   "STORE"};
    return kNames[op.index()];
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct AliasInfo {
    bool grouped = false;
    std::string bag_name;
};

class Parser {
public:
    explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

    Script parse_script() {
        Script script;
        while (!at_end()) script.statements.push_back(parse_statement(script.statements.size()));
        return script;
    }

private:
    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;
    std::map<std::string, AliasInfo> aliases_;

    bool at_end() const { return pos_ >= toks_.size(); }

    [[noreturn]] void fail(const std::string& expected) const {
        if (at_end()) {
            std::size_t line = 1, col = 1;
            if (!toks_.empty()) {
                line = toks_.back().line;
                col = toks_.back().column + toks_.back().text.size();
            }
            throw ParseError(line, col, expected, "end of input");
        }
        const auto& t = toks_[pos_];
        throw ParseError(t.line, t.column, expected, describe(t));
    }

    bool peek(TokenKind kind) const { return !at_end() && toks_[pos_].kind == kind; }
    bool peek(Keyword kw) const { return peek(TokenKind::Keyword) && toks_[pos_].keyword == kw; }

    const Token& expect(TokenKind kind, const std::string& what) {
        if (!peek(kind)) fail(what);
        return toks_[pos_++];
    }

    void expect(Keyword kw) {
        if (!peek(kw)) fail(std::string(to_string(kw)));
        ++pos_;
    }

    bool accept(TokenKind kind) {
        if (!peek(kind)) return false;
        ++pos_;
        return true;
    }

    bool accept(Keyword kw) {
        if (!peek(kw)) return false;
        ++pos_;
        return true;
    }

    std::string identifier(const std::string& what = "identifier") {
        return expect(TokenKind::Identifier, what).text;
    }

    std::string string_literal(const std::string& what = "quoted string") {
        return expect(TokenKind::String, what).text;
    }

    std::string bound_alias(std::size_t index) {
        const auto name = identifier("relation name");
        if (!aliases_.count(name)) throw UnboundRelation(name, index);
        return name;
    }

    // PigStorage('delim' [, option ...]); only '-schema' is a known option.
    void storage(std::string& delimiter, bool* schema_flag) {
        const auto& fn = expect(TokenKind::Identifier, "PigStorage");
        if (fn.text != "PigStorage") {
            --pos_;
            fail("PigStorage");
        }
        expect(TokenKind::LParen, "'('");
        if (peek(TokenKind::String)) {
            delimiter = string_literal();
            if (delimiter.empty()) {
                --pos_;
                fail("non-empty delimiter");
            }
            while (accept(TokenKind::Comma)) {
                const auto option = string_literal("storage option");
                if (option != "-schema" || !schema_flag) {
                    --pos_;
                    fail(schema_flag ? "'-schema'" : "')'");
                }
                *schema_flag = true;
            }
        }
        expect(TokenKind::RParen, "')'");
    }

    Statement parse_statement(std::size_t index) {
        Statement st;
        st.line = at_end() ? 0 : toks_[pos_].line;
        if (accept(Keyword::Store)) {
            StoreStmt s;
            s.source = bound_alias(index);
            expect(Keyword::Into);
            s.path = string_literal("output path");
            if (accept(Keyword::Using)) storage(s.delimiter, &s.schema_flag);
            expect(TokenKind::Semicolon, "';'");
            st.op = std::move(s);
            return st;
        }

        st.target = identifier("relation name or STORE");
        expect(TokenKind::Equals, "'='");
        AliasInfo info;
        if (accept(Keyword::Load)) {
            LoadStmt s;
            s.path = string_literal("input path");
            if (accept(Keyword::Using)) storage(s.delimiter, nullptr);
            expect(Keyword::As);
            expect(TokenKind::LParen, "'('");
            do {
                Column c;
                c.name = identifier("column name");
                expect(TokenKind::Colon, "':'");
                const auto& type_tok = expect(TokenKind::Identifier, "column type");
                auto type = parse_column_type(type_tok.text);
                if (!type) {
                    --pos_;
                    fail("chararray or int");
                }
                c.type = *type;
                if (s.schema.index_of(c.name)) {
                    pos_ -= 3;
                    fail("unique column name");
                }
                s.schema.columns.push_back(std::move(c));
            } while (accept(TokenKind::Comma));
            expect(TokenKind::RParen, "')'");
            st.op = std::move(s);
        } else if (accept(Keyword::Union)) {
            UnionStmt s;
            s.inputs.push_back(bound_alias(index));
            if (!peek(TokenKind::Comma)) fail("',' (UNION needs at least two relations)");
            while (accept(TokenKind::Comma)) s.inputs.push_back(bound_alias(index));
            st.op = std::move(s);
        } else if (accept(Keyword::Filter)) {
            FilterStmt s;
            s.source = bound_alias(index);
            expect(Keyword::By);
            std::size_t parens = 0;
            while (accept(TokenKind::LParen)) ++parens;
            s.column = identifier("column name");
            expect(Keyword::Matches);
            s.pattern = string_literal("pattern");
            while (parens-- > 0) expect(TokenKind::RParen, "')'");
            st.op = std::move(s);
        } else if (accept(Keyword::Group)) {
            GroupByStmt s;
            s.source = bound_alias(index);
            expect(Keyword::By);
            s.column = identifier("column name");
            info.grouped = true;
            info.bag_name = s.source;
            st.op = std::move(s);
        } else if (accept(Keyword::Foreach)) {
            const auto source = bound_alias(index);
            expect(Keyword::Generate);
            const AliasInfo src = aliases_.at(source);
            if (src.grouped) {
                ForEachAggregateStmt s{source, {}};
                do {
                    if (accept(Keyword::Group)) {
                        s.items.push_back(AggregateItem{AggregateItem::Kind::Group, {}, {}});
                    } else if (accept(Keyword::Sum)) {
                        AggregateItem item{AggregateItem::Kind::Sum, {}, {}};
                        expect(TokenKind::LParen, "'('");
                        item.bag = identifier("bag name");
                        if (item.bag != src.bag_name) {
                            --pos_;
                            fail("bag '" + src.bag_name + "'");
                        }
                        expect(TokenKind::Dot, "'.'");
                        item.column = identifier("column name");
                        expect(TokenKind::RParen, "')'");
                        s.items.push_back(std::move(item));
                    } else {
                        fail("group or SUM(...) over a grouped relation");
                    }
                } while (accept(TokenKind::Comma));
                st.op = std::move(s);
            } else {
                ForEachGenerateStmt s{source, {}};
                do {
                    if (peek(Keyword::Group) || peek(Keyword::Sum)) fail("column name (relation is not grouped)");
                    s.columns.push_back(identifier("column name"));
                } while (accept(TokenKind::Comma));
                st.op = std::move(s);
            }
        } else {
            fail("LOAD, UNION, FILTER, FOREACH or GROUP");
        }
        expect(TokenKind::Semicolon, "';'");
        aliases_[st.target] = std::move(info);
        return st;
    }
};

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\'': out += "\\'"; break;
            case '\\': out += "\\\\"; break;
            default: out += c;
        }
    }
    return out;
}

std::string storage_clause(const std::string& delimiter, bool schema_flag) {
    std::string out = " USING PigStorage(" + quote(delimiter);
    if (schema_flag) out += ", '-schema'";
    return out + ")";
}

}  // namespace

std::string quote(std::string_view text) {
    return "'" + escape(text) + "'";
}

Script parse(const std::vector<Token>& tokens) {
    return Parser(tokens).parse_script();
}

Script parse(std::string_view source) {
    return parse(lex(source));
}

std::string pretty_print(const Script& script) {
    std::ostringstream os;
    auto join = [](const std::vector<std::string>& items) {
        std::string out;
        for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
        return out;
    };
    for (const auto& st : script.statements) {
        if (!st.target.empty()) os << st.target << " = ";
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, LoadStmt>) {
                    os << "LOAD " << quote(s.path) << storage_clause(s.delimiter, false) << " AS (";
                    for (std::size_t i = 0; i < s.schema.columns.size(); ++i) {
                        const auto& c = s.schema.columns[i];
                        os << (i ? ", " : "") << c.name << ':' << to_string(c.type);
                    }
                    os << ')';
                } else if constexpr (std::is_same_v<T, UnionStmt>) {
                    os << "UNION " << join(s.inputs);
                } else if constexpr (std::is_same_v<T, FilterStmt>) {
                    os << "FILTER " << s.source << " BY (" << s.column << " MATCHES " << quote(s.pattern) << ')';
                } else if constexpr (std::is_same_v<T, ForEachGenerateStmt>) {
                    os << "FOREACH " << s.source << " GENERATE " << join(s.columns);
                } else if constexpr (std::is_same_v<T, ForEachAggregateStmt>) {
                    std::vector<std::string> items;
                    for (const auto& item : s.items) {
                        items.push_back(item.kind == AggregateItem::Kind::Group
                                            ? std::string("group")
                                            : "SUM(" + item.bag + "." + item.column + ")");
                    }
                    os << "FOREACH " << s.source << " GENERATE " << join(items);
                } else if constexpr (std::is_same_v<T, GroupByStmt>) {
                    os << "GROUP " << s.source << " BY " << s.column;
                } else if constexpr (std::is_same_v<T, StoreStmt>) {
                    os << "STORE " << s.source << " INTO " << quote(s.path)
                       << storage_clause(s.delimiter, s.schema_flag);
                }
            },
            st.op);
        os << ";\n";
    }
    return os.str();
}

}  // namespace hitlog::pig
