#pragma once

#include "hitlog/piglite/relation.hpp"
#include "hitlog/piglite/syntax.hpp"

#include <exception>
#include <map>
#include <variant>

namespace hitlog::pig {

using Binding = std::variant<Relation, GroupedRelation>;

/// An operation failure, annotated with the 0-based statement index.
/// `cause()` holds the original error.
class ExecutionError : public PigError {
public:
    ExecutionError(std::size_t statement_index, std::string_view operation, const std::exception& cause);
    std::size_t statement_index() const { return statement_index_; }
    std::exception_ptr cause() const { return cause_; }

private:
    std::size_t statement_index_;
    std::exception_ptr cause_;
};

struct ExecutionResult {
    std::map<std::string, Binding> environment;
    std::vector<fs::path> stored;  // output directories, in STORE order
};

/// Evaluates statements in order. Relative paths resolve against
/// `working_dir`; rebinding an alias replaces its previous value.
ExecutionResult execute(const Script& script, const fs::path& working_dir);

}  // namespace hitlog::pig
