#include "gumkit/semantics.hpp"

#include <algorithm>
#include <sstream>

namespace gumkit {

// -------------------------------------------------------------- Structure

Structure::Structure(std::shared_ptr<const Signature> sig, std::vector<std::string> universe)
    : sig_(std::move(sig)), universe_(std::move(universe)) {
    if (!sig_) throw std::invalid_argument("Structure: null signature");
    if (universe_.empty()) throw std::invalid_argument("Structure: empty universe");
    std::set<std::string> seen(universe_.begin(), universe_.end());
    if (seen.size() != universe_.size())
        throw std::invalid_argument("Structure: duplicate universe element");
}

std::size_t Structure::element_index(const std::string& name) const {
    for (std::size_t i = 0; i < universe_.size(); ++i)
        if (universe_[i] == name) return i;
    throw EvalError("unknown universe element '" + name + "'");
}

std::size_t Structure::tuple_index_impl(const std::size_t* tuple, std::size_t n) const {
    std::size_t index = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (tuple[i] >= universe_.size()) throw EvalError("element index out of range");
        index = index * universe_.size() + tuple[i];
    }
    return index;
}

std::vector<std::size_t> Structure::tuple_at(std::size_t index, std::size_t arity) const {
    std::vector<std::size_t> tuple(arity, 0);
    for (std::size_t i = arity; i-- > 0;) {
        tuple[i] = index % universe_.size();
        index /= universe_.size();
    }
    return tuple;
}

namespace {

std::size_t table_size(std::size_t universe, std::size_t arity) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < arity; ++i) n *= universe;
    return n;
}

} // namespace

void Structure::set_pred(const std::string& name, std::vector<TruthValue> table) {
    const Signature::PredSym* p = sig_->find_pred(name);
    if (!p) throw std::invalid_argument("Structure: unknown predicate '" + name + "'");
    if (table.size() != table_size(universe_.size(), p->arity))
        throw std::invalid_argument("Structure: wrong table size for '" + name + "'");
    preds_[name] = std::move(table);
}

void Structure::set_func(const std::string& name, std::vector<std::size_t> table) {
    const Signature::FuncSym* f = sig_->find_func(name);
    if (!f) throw std::invalid_argument("Structure: unknown function '" + name + "'");
    if (table.size() != table_size(universe_.size(), f->arity))
        throw std::invalid_argument("Structure: wrong table size for '" + name + "'");
    for (const std::size_t e : table)
        if (e >= universe_.size())
            throw std::invalid_argument("Structure: function value out of range for '" + name + "'");
    funcs_[name] = std::move(table);
}

void Structure::set_const(const std::string& name, std::size_t element) {
    if (!sig_->has_constant(name))
        throw std::invalid_argument("Structure: unknown constant '" + name + "'");
    if (element >= universe_.size())
        throw std::invalid_argument("Structure: constant value out of range for '" + name + "'");
    consts_[name] = element;
}

const std::vector<TruthValue>& Structure::pred_table(const std::string& name) const {
    const auto it = preds_.find(name);
    if (it == preds_.end()) throw EvalError("no table for predicate '" + name + "'");
    return it->second;
}

const std::vector<std::size_t>& Structure::func_table(const std::string& name) const {
    const auto it = funcs_.find(name);
    if (it == funcs_.end()) throw EvalError("no table for function '" + name + "'");
    return it->second;
}


std::size_t Structure::const_value(const std::string& name) const {
    const auto it = consts_.find(name);
    if (it == consts_.end()) throw EvalError("no value for constant '" + name + "'");
    return it->second;
}

void Structure::validate() const {
    for (const auto& p : sig_->predicates)
        if (pred_table(p.name).size() != table_size(universe_.size(), p.arity))
            throw EvalError("predicate table '" + p.name + "' has wrong size");
    for (const auto& f : sig_->functions)
        if (func_table(f.name).size() != table_size(universe_.size(), f.arity))
            throw EvalError("function table '" + f.name + "' has wrong size");
    for (const auto& c : sig_->constants) const_value(c);
}

bool operator==(const Structure& a, const Structure& b) {
    return a.universe_ == b.universe_ && a.preds_ == b.preds_ && a.funcs_ == b.funcs_ &&
           a.consts_ == b.consts_;
}

// ------------------------------------------------------------- evaluation

namespace {

std::size_t eval_term_impl(const Structure& m, const Assignment& env, const TermPtr& t) {
    switch (t->kind()) {
    case Term::Kind::Variable: {
        const auto it = env.find(t->name());
        if (it == env.end()) throw EvalError("unbound variable '" + t->name() + "'");
        return it->second;
    }
    case Term::Kind::Constant:
        return m.const_value(t->name());
    case Term::Kind::Apply: {
        const auto& ts = t->args();
        // arguments land in a stack buffer; evaluation sits in every
        // inner search loop, so tuple heap traffic matters
        if (ts.size() <= 8) {
            std::size_t buf[8];
            for (std::size_t i = 0; i < ts.size(); ++i) buf[i] = eval_term_impl(m, env, ts[i]);
            return m.func_value(t->name(), std::span<const std::size_t>(buf, ts.size()));
        }
        std::vector<std::size_t> args;
        args.reserve(ts.size());
        for (const auto& a : ts) args.push_back(eval_term_impl(m, env, a));
        return m.func_value(t->name(), args);
    }
    }
    throw EvalError("eval_term: unreachable");
}

// walks the shared nodes directly: no handle copies, no refcounting
TruthValue eval_core(const Structure& m, Assignment& env, const FormulaNode& n) {
    switch (n.kind) {
    case Formula::Kind::Rat:
        return TruthValue::hat(n.rat);
    case Formula::Kind::Atom: {
        const auto& ts = n.args;
        if (ts.size() <= 8) {
            std::size_t buf[8];
            for (std::size_t i = 0; i < ts.size(); ++i) buf[i] = eval_term_impl(m, env, ts[i]);
            return m.pred_value(n.name, std::span<const std::size_t>(buf, ts.size()));
        }
        std::vector<std::size_t> tuple;
        tuple.reserve(ts.size());
        for (const auto& t : ts) tuple.push_back(eval_term_impl(m, env, t));
        return m.pred_value(n.name, tuple);
    }
    case Formula::Kind::And:
        return tv_max(eval_core(m, env, *n.left), eval_core(m, env, *n.right));
    case Formula::Kind::Imp:
        return tv_residuum(eval_core(m, env, *n.left), eval_core(m, env, *n.right));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
        const auto [slot, fresh] = env.try_emplace(n.name, 0);
        const std::size_t saved = fresh ? 0 : slot->second;
        TruthValue acc;
        const bool universal = n.kind == Formula::Kind::Forall;
        for (std::size_t e = 0; e < m.size(); ++e) {
            slot->second = e;
            const TruthValue v = eval_core(m, env, *n.left);
            if (e == 0)
                acc = v;
            else if (universal ? acc < v : v < acc)
                acc = v;
        }
        if (fresh)
            env.erase(slot);
        else
            slot->second = saved;
        return acc;
    }
    default:
        throw EvalError("eval: sugared formula reached the core evaluator");
    }
}

} // namespace

std::size_t eval_term(const Structure& m, const Assignment& env, const TermPtr& t) {
    return eval_term_impl(m, env, t);
}

TruthValue eval_formula(const Structure& m, const Assignment& env, const Formula& f) {
    Assignment scratch = env;
    const Formula core = desugar(f);
    return eval_core(m, scratch, *core.node());
}

TruthValue eval_formula_scratch(const Structure& m, Assignment& env, const Formula& f) {
    const Formula core = desugar(f);
    return eval_core(m, env, *core.node());
}

bool satisfies(const Structure& m, const Formula& sentence) {
    if (!is_sentence(sentence))
        throw EvalError("satisfies: formula has free variables");
    return eval_formula(m, {}, sentence) == TruthValue::zero();
}

bool models_theory(const Structure& m, const std::vector<Formula>& theory) {
    return std::all_of(theory.begin(), theory.end(),
                       [&m](const Formula& f) { return satisfies(m, f); });
}

Rational truth_degree(const Structure& m, const Formula& sentence) {
    if (!is_sentence(sentence))
        throw EvalError("truth_degree: formula has free variables");
    return eval_formula(m, {}, sentence).first();
}

// --------------------------------------------------------- dual structure

DualStructure::DualStructure(std::shared_ptr<const Signature> sig,
                             std::vector<std::string> universe)
    : sig_(std::move(sig)), universe_(std::move(universe)) {
    if (!sig_) throw std::invalid_argument("DualStructure: null signature");
    if (universe_.empty()) throw std::invalid_argument("DualStructure: empty universe");
}

std::size_t DualStructure::tuple_index(const std::vector<std::size_t>& tuple) const {
    std::size_t index = 0;
    for (const std::size_t e : tuple) {
        if (e >= universe_.size()) throw EvalError("element index out of range");
        index = index * universe_.size() + e;
    }
    return index;
}

void DualStructure::set_pred(const std::string& name, std::vector<DualTruthValue> table) {
    const Signature::PredSym* p = sig_->find_pred(name);
    if (!p) throw std::invalid_argument("DualStructure: unknown predicate '" + name + "'");
    if (table.size() != table_size(universe_.size(), p->arity))
        throw std::invalid_argument("DualStructure: wrong table size for '" + name + "'");
    preds_[name] = std::move(table);
}

void DualStructure::set_func(const std::string& name, std::vector<std::size_t> table) {
    funcs_[name] = std::move(table);
}

void DualStructure::set_const(const std::string& name, std::size_t element) {
    consts_[name] = element;
}

DualTruthValue DualStructure::pred_value(const std::string& name,
                                         const std::vector<std::size_t>& tuple) const {
    const auto it = preds_.find(name);
    if (it == preds_.end()) throw EvalError("no table for predicate '" + name + "'");
    return it->second[tuple_index(tuple)];
}

const std::vector<DualTruthValue>& DualStructure::pred_table(const std::string& name) const {
    const auto it = preds_.find(name);
    if (it == preds_.end()) throw EvalError("no table for predicate '" + name + "'");
    return it->second;
}

std::size_t DualStructure::func_value(const std::string& name,
                                      const std::vector<std::size_t>& tuple) const {
    const auto it = funcs_.find(name);
    if (it == funcs_.end()) throw EvalError("no table for function '" + name + "'");
    return it->second[tuple_index(tuple)];
}

std::size_t DualStructure::const_value(const std::string& name) const {
    const auto it = consts_.find(name);
    if (it == consts_.end()) throw EvalError("no value for constant '" + name + "'");
    return it->second;
}

DualStructure to_dual(const Structure& m) {
    DualStructure out(m.sig_ptr(), m.universe());
    for (const auto& p : m.sig().predicates) {
        const auto& table = m.pred_table(p.name);
        std::vector<DualTruthValue> dual;
        dual.reserve(table.size());
        for (const auto& v : table) dual.push_back(tv_u(v));
        out.set_pred(p.name, std::move(dual));
    }
    for (const auto& f : m.sig().functions) out.set_func(f.name, m.func_table(f.name));
    for (const auto& c : m.sig().constants) out.set_const(c, m.const_value(c));
    return out;
}

namespace {

std::size_t eval_term_dual(const DualStructure& m, const Assignment& env, const TermPtr& t) {
    switch (t->kind()) {
    case Term::Kind::Variable: {
        const auto it = env.find(t->name());
        if (it == env.end()) throw EvalError("unbound variable '" + t->name() + "'");
        return it->second;
    }
    case Term::Kind::Constant:
        return m.const_value(t->name());
    case Term::Kind::Apply: {
        std::vector<std::size_t> args;
        args.reserve(t->args().size());
        for (const auto& a : t->args()) args.push_back(eval_term_dual(m, env, a));
        return m.func_value(t->name(), args);
    }
    }
    throw EvalError("eval_term: unreachable");
}

DualTruthValue eval_dual_core(const DualStructure& m, Assignment& env, const Formula& f) {
    switch (f.kind()) {
    case Formula::Kind::Rat:
        return tv_u(TruthValue::hat(f.rat_value()));
    case Formula::Kind::Atom: {
        std::vector<std::size_t> tuple;
        tuple.reserve(f.atom_args().size());
        for (const auto& t : f.atom_args()) tuple.push_back(eval_term_dual(m, env, t));
        return m.pred_value(f.pred_name(), tuple);
    }
    case Formula::Kind::And:
        return dual_min(eval_dual_core(m, env, f.lhs()), eval_dual_core(m, env, f.rhs()));
    case Formula::Kind::Imp:
        return dual_residuum(eval_dual_core(m, env, f.lhs()), eval_dual_core(m, env, f.rhs()));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
        const std::string& var = f.quant_var();
        const auto old = env.find(var);
        const bool had = old != env.end();
        const std::size_t saved = had ? old->second : 0;
        DualTruthValue acc;
        const bool universal = f.kind() == Formula::Kind::Forall;
        for (std::size_t e = 0; e < m.size(); ++e) {
            env[var] = e;
            const DualTruthValue v = eval_dual_core(m, env, f.body());
            if (e == 0)
                acc = v;
            else if (universal ? v < acc : acc < v) // forall -> inf, exists -> sup
                acc = v;
        }
        if (had)
            env[var] = saved;
        else
            env.erase(var);
        return acc;
    }
    default:
        throw EvalError("eval_dual: sugared formula reached the core evaluator");
    }
}

} // namespace

DualTruthValue eval_dual(const DualStructure& m, const Assignment& env, const Formula& f) {
    Assignment scratch = env;
    return eval_dual_core(m, scratch, desugar(f));
}

// ---------------------------------------------------------- named elements

Structure with_named_elements(const Structure& m) {
    auto named_sig = std::make_shared<Signature>(m.sig());
    for (const auto& e : m.universe()) {
        const std::string name = "c_" + e;
        if (named_sig->find_pred(name) || named_sig->find_func(name) ||
            named_sig->has_constant(name))
            throw std::invalid_argument("with_named_elements: symbol '" + name +
                                        "' already declared");
        named_sig->constants.push_back(name);
    }
    Structure out(named_sig, m.universe());
    for (const auto& p : m.sig().predicates) out.set_pred(p.name, m.pred_table(p.name));
    for (const auto& f : m.sig().functions) out.set_func(f.name, m.func_table(f.name));
    for (const auto& c : m.sig().constants) out.set_const(c, m.const_value(c));
    for (std::size_t i = 0; i < m.universe().size(); ++i)
        out.set_const("c_" + m.universe()[i], i);
    return out;
}

// ----------------------------------------------------- sentence enumeration

namespace {

// Terms over in-scope variables v1..vj, constants, and one level of
// function application; variables first, then constants, then
// applications in declaration order with row-major argument tuples.
std::vector<TermPtr> term_pool(const Signature& sig, std::size_t scope_vars) {
    std::vector<TermPtr> base;
    for (std::size_t i = 1; i <= scope_vars; ++i)
        base.push_back(Term::variable("v" + std::to_string(i)));
    for (const auto& c : sig.constants) base.push_back(Term::constant(c));
    std::vector<TermPtr> out = base;
    for (const auto& f : sig.functions) {
        std::vector<std::size_t> idx(f.arity, 0);
        if (f.arity == 0) {
            out.push_back(Term::apply(f.name, {}));
            continue;
        }
        if (base.empty()) continue;
        for (;;) {
            std::vector<TermPtr> args;
            args.reserve(f.arity);
            for (const std::size_t k : idx) args.push_back(base[k]);
            out.push_back(Term::apply(f.name, std::move(args)));
            std::size_t pos = f.arity;
            while (pos > 0) {
                if (++idx[pos - 1] < base.size()) break;
                idx[pos - 1] = 0;
                --pos;
            }
            if (pos == 0) break;
        }
    }
    return out;
}

struct LeveledFormula {
    Formula formula;
    std::size_t depth;
};

} // namespace

std::vector<Formula> enumerate_sentences(const Signature& sig, std::size_t depth,
                                         const std::vector<Rational>& pool, std::size_t budget,
                                         std::size_t max_free_vars) {
    // exact[k][j]: formulas of exact depth k with free variables among
    // v1..v_{max_free_vars + j} where j quantifier levels are open above.
    // Each list is capped by budget, which truncates deep levels but keeps
    // the stream deterministic.
    const std::size_t max_scope = max_free_vars + depth;
    std::vector<std::vector<std::vector<Formula>>> exact(
        depth + 1, std::vector<std::vector<Formula>>(max_scope + 1));

    for (std::size_t scope = 0; scope <= max_scope; ++scope) {
        auto& level0 = exact[0][scope];
        for (const auto& r : pool) {
            if (level0.size() >= budget) break;
            level0.push_back(Formula::rat(r));
        }
        const auto terms = term_pool(sig, scope);
        for (const auto& p : sig.predicates) {
            if (level0.size() >= budget) break;
            if (p.arity == 0) {
                level0.push_back(Formula::atom(p.name, {}));
                continue;
            }
            if (terms.empty()) continue;
            std::vector<std::size_t> idx(p.arity, 0);
            for (;;) {
                if (level0.size() >= budget) break;
                std::vector<TermPtr> args;
                args.reserve(p.arity);
                for (const std::size_t k : idx) args.push_back(terms[k]);
                level0.push_back(Formula::atom(p.name, std::move(args)));
                std::size_t pos = p.arity;
                while (pos > 0) {
                    if (++idx[pos - 1] < terms.size()) break;
                    idx[pos - 1] = 0;
                    --pos;
                }
                if (pos == 0) break;
            }
        }
    }

    for (std::size_t k = 1; k <= depth; ++k) {
        // level k is only consulted at scopes up to max_free_vars + (depth - k)
        for (std::size_t scope = 0; scope + k <= max_scope; ++scope) {
            auto& out = exact[k][scope];
            // formulas of depth <= k-1 at this scope, level by level
            std::vector<LeveledFormula> prefix;
            for (std::size_t d = 0; d < k; ++d)
                for (const auto& f : exact[d][scope]) prefix.push_back({f, d});
            for (const Formula::Kind kind : {Formula::Kind::And, Formula::Kind::Imp}) {
                for (const auto& [a, da] : prefix) {
                    if (out.size() >= budget) break;
                    for (const auto& [b, db] : prefix) {
                        if (out.size() >= budget) break;
                        if (std::max(da, db) + 1 != k) continue;
                        out.push_back(kind == Formula::Kind::And ? Formula::conj(a, b)
                                                                 : Formula::imp(a, b));
                    }
                }
            }
            if (scope + 1 <= max_scope) {
                const std::string var = "v" + std::to_string(scope + 1);
                for (const auto& body : exact[k - 1][scope + 1]) {
                    if (out.size() >= budget) break;
                    out.push_back(Formula::forall(var, body));
                }
                for (const auto& body : exact[k - 1][scope + 1]) {
                    if (out.size() >= budget) break;
                    out.push_back(Formula::exists(var, body));
                }
            }
        }
    }

    std::vector<Formula> stream;
    for (std::size_t k = 0; k <= depth; ++k) {
        for (const auto& f : exact[k][max_free_vars]) {
            if (stream.size() >= budget) return stream;
            stream.push_back(f);
        }
    }
    return stream;
}

std::vector<Formula> theory_of_bounded(const Structure& m, std::size_t depth,
                                       const std::vector<Rational>& pool, std::size_t budget,
                                       bool name_elements) {
    const Structure* target = &m;
    std::optional<Structure> named;
    if (name_elements) {
        named = with_named_elements(m);
        target = &*named;
    }
    std::vector<Formula> out;
    for (const auto& f : enumerate_sentences(target->sig(), depth, pool, budget, 0))
        if (satisfies(*target, f)) out.push_back(f);
    return out;
}

// ---------------------------------------------------------- structure files

namespace {

std::string strip_comment(const std::string& line) {
    const auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

std::vector<std::string> words_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

// "(a,b)=(1/2,3/4)" -> tuple names and value text
std::pair<std::vector<std::string>, std::string> split_pred_entry(const std::string& entry,
                                                                  std::size_t lineno) {
    if (entry.empty() || entry.front() != '(')
        throw ParseError(lineno, "bad table entry '" + entry + "'");
    const auto close = entry.find(')');
    if (close == std::string::npos || close + 1 >= entry.size() || entry[close + 1] != '=')
        throw ParseError(lineno, "bad table entry '" + entry + "'");
    std::vector<std::string> tuple;
    const std::string inner = entry.substr(1, close - 1);
    if (!inner.empty()) {
        std::istringstream in(inner);
        std::string cell;
        while (std::getline(in, cell, ',')) tuple.push_back(cell);
    }
    return {tuple, entry.substr(close + 2)};
}

} // namespace

Structure parse_structure(const std::string& text, std::shared_ptr<const Signature> sig) {
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    std::optional<Structure> m;
    std::set<std::string> defined;
    auto need_structure = [&]() -> Structure& {
        if (!m) throw ParseError(lineno, "universe line must come first");
        return *m;
    };
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip_comment(raw);
        auto words = words_of(line);
        if (words.empty()) continue;
        const std::string head = words[0];
        if (head == "universe:") {
            if (m) throw ParseError(lineno, "duplicate universe line");
            m.emplace(sig, std::vector<std::string>(words.begin() + 1, words.end()));
            continue;
        }
        if (head != "pred" && head != "func" && head != "const")
            throw ParseError(lineno, "expected 'universe:', 'pred', 'func' or 'const'");
        if (words.size() < 2 || words[1].size() < 2 || words[1].back() != ':')
            throw ParseError(lineno, "expected '" + head + " NAME: ...'");
        const std::string sym = words[1].substr(0, words[1].size() - 1);
        const std::size_t first_entry = 2;
        Structure& st = need_structure();
        if (!defined.insert(sym).second)
            throw ParseError(lineno, "duplicate table for '" + sym + "'");
        if (head == "pred") {
            const Signature::PredSym* p = sig->find_pred(sym);
            if (!p) throw ParseError(lineno, "unknown predicate '" + sym + "'");
            std::vector<TruthValue> table;
            std::vector<std::vector<std::size_t>> tuples;
            for (std::size_t i = first_entry; i < words.size(); ++i) {
                const auto [tuple_names, value_text] = split_pred_entry(words[i], lineno);
                if (tuple_names.size() != p->arity)
                    throw ParseError(lineno, "tuple arity mismatch for '" + sym + "'");
                std::vector<std::size_t> tuple;
                for (const auto& t : tuple_names) tuple.push_back(st.element_index(t));
                tuples.push_back(tuple);
                try {
                    table.push_back(TruthValue::parse(value_text));
                } catch (const std::exception& e) {
                    throw ParseError(lineno, std::string("bad truth value: ") + e.what());
                }
            }
            if (table.size() != table_size(st.size(), p->arity))
                throw ParseError(lineno, "predicate '" + sym + "' needs " +
                                             std::to_string(table_size(st.size(), p->arity)) +
                                             " entries");
            for (std::size_t i = 0; i < tuples.size(); ++i)
                if (st.tuple_index(tuples[i]) != i)
                    throw ParseError(lineno, "entries for '" + sym +
                                                 "' must follow row-major universe order");
            st.set_pred(sym, std::move(table));
        } else if (head == "func") {
            const Signature::FuncSym* fn = sig->find_func(sym);
            if (!fn) throw ParseError(lineno, "unknown function '" + sym + "'");
            std::vector<std::size_t> table;
            std::vector<std::vector<std::size_t>> tuples;
            for (std::size_t i = first_entry; i < words.size(); ++i) {
                const auto arrow = words[i].find(")->");
                if (arrow == std::string::npos || words[i].front() != '(')
                    throw ParseError(lineno, "bad function entry '" + words[i] + "'");
                const std::string inner = words[i].substr(1, arrow - 1);
                std::vector<std::size_t> tuple;
                if (!inner.empty()) {
                    std::istringstream tin(inner);
                    std::string cell;
                    while (std::getline(tin, cell, ',')) tuple.push_back(st.element_index(cell));
                }
                if (tuple.size() != fn->arity)
                    throw ParseError(lineno, "tuple arity mismatch for '" + sym + "'");
                tuples.push_back(tuple);
                table.push_back(st.element_index(words[i].substr(arrow + 3)));
            }
            if (table.size() != table_size(st.size(), fn->arity))
                throw ParseError(lineno, "function '" + sym + "' needs " +
                                             std::to_string(table_size(st.size(), fn->arity)) +
                                             " entries");
            for (std::size_t i = 0; i < tuples.size(); ++i)
                if (st.tuple_index(tuples[i]) != i)
                    throw ParseError(lineno, "entries for '" + sym +
                                                 "' must follow row-major universe order");
            st.set_func(sym, std::move(table));
        } else {
            if (!sig->has_constant(sym))
                throw ParseError(lineno, "unknown constant '" + sym + "'");
            if (words.size() != first_entry + 1)
                throw ParseError(lineno, "constant '" + sym + "' takes one element");
            st.set_const(sym, st.element_index(words[first_entry]));
        }
    }
    if (!m) throw ParseError(lineno, "missing universe line");
    m->validate();
    return *m;
}

namespace {

template <typename Table, typename RenderCell>
void render_pred_line(std::ostringstream& out, const std::vector<std::string>& universe,
                      const std::string& name, std::size_t arity, const Table& table,
                      RenderCell&& cell) {
    out << "pred " << name << ":";
    std::vector<std::size_t> idx(arity, 0);
    for (std::size_t row = 0; row < table.size(); ++row) {
        out << " (";
        for (std::size_t i = 0; i < arity; ++i) {
            if (i) out << ",";
            out << universe[idx[i]];
        }
        out << ")=" << cell(table[row]);
        std::size_t pos = arity;
        while (pos > 0) {
            if (++idx[pos - 1] < universe.size()) break;
            idx[pos - 1] = 0;
            --pos;
        }
    }
    out << "\n";
}

} // namespace

std::string render_structure(const Structure& m) {
    std::ostringstream out;
    out << "universe:";
    for (const auto& e : m.universe()) out << " " << e;
    out << "\n";
    for (const auto& p : m.sig().predicates)
        render_pred_line(out, m.universe(), p.name, p.arity, m.pred_table(p.name),
                         [](const TruthValue& v) { return v.str(); });
    for (const auto& f : m.sig().functions) {
        out << "func " << f.name << ":";
        const auto& table = m.func_table(f.name);
        std::vector<std::size_t> idx(f.arity, 0);
        for (std::size_t row = 0; row < table.size(); ++row) {
            out << " (";
            for (std::size_t i = 0; i < f.arity; ++i) {
                if (i) out << ",";
                out << m.universe()[idx[i]];
            }
            out << ")->" << m.universe()[table[row]];
            std::size_t pos = f.arity;
            while (pos > 0) {
                if (++idx[pos - 1] < m.universe().size()) break;
                idx[pos - 1] = 0;
                --pos;
            }
        }
        out << "\n";
    }
    for (const auto& c : m.sig().constants)
        out << "const " << c << ": " << m.universe()[m.const_value(c)] << "\n";
    return out.str();
}

std::string render_dual_structure(const DualStructure& m) {
    std::ostringstream out;
    out << "universe:";
    for (const auto& e : m.universe()) out << " " << e;
    out << "\n";
    for (const auto& p : m.sig().predicates)
        render_pred_line(out, m.universe(), p.name, p.arity, m.pred_table(p.name),
                         [](const DualTruthValue& v) { return v.str(); });
    for (const auto& f : m.sig().functions) {
        out << "func " << f.name << ":";
        std::vector<std::size_t> idx(f.arity, 0);
        const std::size_t rows = table_size(m.universe().size(), f.arity);
        for (std::size_t row = 0; row < rows; ++row) {
            out << " (";
            for (std::size_t i = 0; i < f.arity; ++i) {
                if (i) out << ",";
                out << m.universe()[idx[i]];
            }
            std::vector<std::size_t> tuple = idx;
            out << ")->" << m.universe()[m.func_value(f.name, tuple)];
            std::size_t pos = f.arity;
            while (pos > 0) {
                if (++idx[pos - 1] < m.universe().size()) break;
                idx[pos - 1] = 0;
                --pos;
            }
        }
        out << "\n";
    }
    for (const auto& c : m.sig().constants)
        out << "const " << c << ": " << m.universe()[m.const_value(c)] << "\n";
    return out.str();
}

} // namespace gumkit
