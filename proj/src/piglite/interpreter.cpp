#include "hitlog/piglite/interpreter.hpp"

namespace hitlog::pig {

ExecutionError::ExecutionError(std::size_t statement_index, std::string_view operation, const std::exception& cause)
    : PigError("statement " + std::to_string(statement_index) + " (" + std::string(operation) + "): " + cause.what()),
      statement_index_(statement_index),
      cause_(std::current_exception()) {}

namespace {

class Interpreter {
public:
    explicit Interpreter(fs::path working_dir) : dir_(std::move(working_dir)) {}

    void run(const Statement& st, std::size_t index) {
        for (const auto& name : inputs_of(st.op)) {
            if (!result_.environment.count(name)) throw UnboundRelation(name, index);
        }
        std::visit([&](const auto& s) { apply(st.target, s); }, st.op);
    }

    ExecutionResult take() { return std::move(result_); }

private:
    fs::path dir_;
    ExecutionResult result_;

    fs::path resolve(const std::string& p) const {
        const fs::path path(p);
        return path.is_absolute() ? path : dir_ / path;
    }

    const Relation& flat(const std::string& name) const {
        const auto* r = std::get_if<Relation>(&result_.environment.at(name));
        if (!r) throw PigError("'" + name + "' is a grouped relation; use FOREACH ... GENERATE group, SUM(...)");
        return *r;
    }

    void bind(const std::string& name, Binding b) { result_.environment.insert_or_assign(name, std::move(b)); }

    void apply(const std::string& target, const LoadStmt& s) { bind(target, load(resolve(s.path), s.delimiter, s.schema)); }

    void apply(const std::string& target, const UnionStmt& s) {
        std::vector<const Relation*> inputs;
        for (const auto& name : s.inputs) inputs.push_back(&flat(name));
        bind(target, union_all(inputs));
    }

    void apply(const std::string& target, const FilterStmt& s) {
        bind(target, filter_matches(flat(s.source), s.column, s.pattern));
    }

    void apply(const std::string& target, const ForEachGenerateStmt& s) {
        bind(target, project(flat(s.source), s.columns));
    }

    void apply(const std::string& target, const ForEachAggregateStmt& s) {
        const auto* g = std::get_if<GroupedRelation>(&result_.environment.at(s.source));
        if (!g) throw PigError("'" + s.source + "' is not grouped");
        bind(target, aggregate(*g, s.items));
    }

    void apply(const std::string& target, const GroupByStmt& s) {
        bind(target, group_by(flat(s.source), s.column, s.source));
    }

    void apply(const std::string&, const StoreStmt& s) {
        const auto out = resolve(s.path);
        store(flat(s.source), out, s.delimiter, s.schema_flag);
        result_.stored.push_back(out);
    }
};

}  // namespace

ExecutionResult execute(const Script& script, const fs::path& working_dir) {
    Interpreter interp(working_dir);
    for (std::size_t i = 0; i < script.statements.size(); ++i) {
        const auto& st = script.statements[i];
        try {
            interp.run(st, i);
        } catch (const UnboundRelation&) {
            throw;
        } catch (const std::exception& e) {
            throw ExecutionError(i, operation_name(st.op), e);
        }
    }
    return interp.take();
}

}  // namespace hitlog::pig
