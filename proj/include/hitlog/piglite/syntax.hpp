#pragma once

// Lexer, AST and recursive-descent parser for the supported Pig Latin subset:
//
//   alias = LOAD 'path' [USING PigStorage('delim')] AS (col:type, ...);
//   alias = UNION a, b [, ...];
//   alias = FILTER a BY [(] col MATCHES 'regex' [)];
//   alias = FOREACH a GENERATE col, ...;
//   alias = GROUP a BY col;
//   alias = FOREACH g GENERATE group, SUM(bag.col), ...;
//   STORE a INTO 'path' [USING PigStorage('delim' [, '-schema'])];
//
// Keywords are case-insensitive, aliases and column names are not.
// `--` starts a line comment and /* ... */ a block comment.

#include "hitlog/piglite/relation.hpp"

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hitlog::pig {

enum class Keyword { Load, Using, As, Union, Filter, By, Matches, Foreach, Generate, Group, Store, Into, Sum };

std::string_view to_string(Keyword kw);

enum class TokenKind { Identifier, Keyword, String, Equals, LParen, RParen, Comma, Semicolon, Colon, Dot };

struct Token {
    TokenKind kind;
    std::string text;  // identifier name, decoded string literal, or punctuation
    Keyword keyword = Keyword::Load;
    std::size_t line = 1;
    std::size_t column = 1;

    /// Compares kind, text and keyword; positions are ignored.
    friend bool operator==(const Token& a, const Token& b) {
        return a.kind == b.kind && a.text == b.text && (a.kind != TokenKind::Keyword || a.keyword == b.keyword);
    }
};

std::string describe(const Token& t);

class LexError : public PigError {
public:
    LexError(std::size_t line, std::size_t column, std::string found);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& found() const { return found_; }

private:
    std::size_t line_, column_;
    std::string found_;
};

class ParseError : public PigError {
public:
    ParseError(std::size_t line, std::size_t column, std::string expected, std::string found);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& expected() const { return expected_; }
    const std::string& found() const { return found_; }

private:
    std::size_t line_, column_;
    std::string expected_, found_;
};

class UnboundRelation : public PigError {
public:
    UnboundRelation(std::string name, std::size_t statement_index);
    const std::string& name() const { return name_; }
    std::size_t statement_index() const { return statement_index_; }

private:
    std::string name_;
    std::size_t statement_index_;
};

std::vector<Token> lex(std::string_view source);

struct LoadStmt {
    std::string path;
    std::string delimiter = "\t";
    Schema schema;
    friend bool operator==(const LoadStmt&, const LoadStmt&) = default;
};

struct UnionStmt {
    std::vector<std::string> inputs;
    friend bool operator==(const UnionStmt&, const UnionStmt&) = default;
};

struct FilterStmt {
    std::string source;
    std::string column;
    std::string pattern;
    friend bool operator==(const FilterStmt&, const FilterStmt&) = default;
};

struct ForEachGenerateStmt {
    std::string source;
    std::vector<std::string> columns;
    friend bool operator==(const ForEachGenerateStmt&, const ForEachGenerateStmt&) = default;
};

struct ForEachAggregateStmt {
    std::string source;
    std::vector<AggregateItem> items;
    friend bool operator==(const ForEachAggregateStmt&, const ForEachAggregateStmt&) = default;
};

struct GroupByStmt {
    std::string source;
    std::string column;
    friend bool operator==(const GroupByStmt&, const GroupByStmt&) = default;
};

struct StoreStmt {
    std::string source;
    std::string path;
    std::string delimiter = "\t";
    bool schema_flag = false;
    friend bool operator==(const StoreStmt&, const StoreStmt&) = default;
};

using Operation =
    std::variant<LoadStmt, UnionStmt, FilterStmt, ForEachGenerateStmt, ForEachAggregateStmt, GroupByStmt, StoreStmt>;

struct Statement {
    std::string target;  // empty for STORE
    Operation op;
    std::size_t line = 0;

    /// Structural equality; source positions are ignored.
    friend bool operator==(const Statement& a, const Statement& b) { return a.target == b.target && a.op == b.op; }
};

struct Script {
    std::vector<Statement> statements;
    friend bool operator==(const Script&, const Script&) = default;
};

/// Aliases an operation reads.
std::vector<std::string> inputs_of(const Operation& op);
std::string_view operation_name(const Operation& op);

Script parse(const std::vector<Token>& tokens);
Script parse(std::string_view source);

/// Canonical source text; parse(pretty_print(s)) == s.
std::string pretty_print(const Script& script);
std::string quote(std::string_view text);

}  // namespace hitlog::pig
