#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gumkit/syntax.hpp"
#include "gumkit/truth_value.hpp"

namespace gumkit {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Finite structure: a non-empty ordered universe plus total tables for
// every symbol of the signature. Predicate and function tables are
// flattened row-major over the universe.
class Structure {
public:
    Structure(std::shared_ptr<const Signature> sig, std::vector<std::string> universe);

    const Signature& sig() const { return *sig_; }
    std::shared_ptr<const Signature> sig_ptr() const { return sig_; }
    const std::vector<std::string>& universe() const { return universe_; }
    std::size_t size() const { return universe_.size(); }

    std::size_t element_index(const std::string& name) const;

    // Row-major index of a tuple of element indices. The span overloads
    // are templated on the extent so brace-enclosed tuples keep binding
    // to the vector versions.
    std::size_t tuple_index(const std::vector<std::size_t>& tuple) const {
        return tuple_index_impl(tuple.data(), tuple.size());
    }
    template <std::size_t N>
    std::size_t tuple_index(std::span<const std::size_t, N> tuple) const {
        return tuple_index_impl(tuple.data(), tuple.size());
    }
    std::vector<std::size_t> tuple_at(std::size_t index, std::size_t arity) const;

    void set_pred(const std::string& name, std::vector<TruthValue> table);
    void set_func(const std::string& name, std::vector<std::size_t> table);
    void set_const(const std::string& name, std::size_t element);

    const std::vector<TruthValue>& pred_table(const std::string& name) const;
    const std::vector<std::size_t>& func_table(const std::string& name) const;

    TruthValue pred_value(const std::string& name, const std::vector<std::size_t>& tuple) const {
        return pred_table(name)[tuple_index_impl(tuple.data(), tuple.size())];
    }
    template <std::size_t N>
    TruthValue pred_value(const std::string& name, std::span<const std::size_t, N> tuple) const {
        return pred_table(name)[tuple_index_impl(tuple.data(), tuple.size())];
    }
    std::size_t func_value(const std::string& name, const std::vector<std::size_t>& tuple) const {
        return func_table(name)[tuple_index_impl(tuple.data(), tuple.size())];
    }
    template <std::size_t N>
    std::size_t func_value(const std::string& name, std::span<const std::size_t, N> tuple) const {
        return func_table(name)[tuple_index_impl(tuple.data(), tuple.size())];
    }
    std::size_t const_value(const std::string& name) const;

    // Every table present with the right cardinality.
    void validate() const;

    friend bool operator==(const Structure& a, const Structure& b);

private:
    std::size_t tuple_index_impl(const std::size_t* tuple, std::size_t n) const;

    std::shared_ptr<const Signature> sig_;
    std::vector<std::string> universe_;
    std::map<std::string, std::vector<TruthValue>> preds_;
    std::map<std::string, std::vector<std::size_t>> funcs_;
    std::map<std::string, std::size_t> consts_;
};

// Variable assignment: names to element indices.
using Assignment = std::map<std::string, std::size_t>;

std::size_t eval_term(const Structure& m, const Assignment& env, const TermPtr& t);

// Value of a formula under an assignment. Conjunction is max, implication
// the residuum, the universal quantifier sup (= max over the finite
// universe), the existential inf. Sugar is desugared on entry.
TruthValue eval_formula(const Structure& m, const Assignment& env, const Formula& f);

// Same value, but env doubles as live scratch space for quantifier
// bindings instead of being copied per call: it is back to its entry
// state on normal return and unspecified after a throw. For tight loops
// that evaluate many formulas under one reused assignment.
TruthValue eval_formula_scratch(const Structure& m, Assignment& env, const Formula& f);

// A sentence holds when its value is (0,0).
bool satisfies(const Structure& m, const Formula& sentence);
bool models_theory(const Structure& m, const std::vector<Formula>& theory);

// First coordinate of the sentence's value: the infimum of the rationals
// r for which "r-bar -> phi" holds.
Rational truth_degree(const Structure& m, const Formula& sentence);

// Structure on the dual value side: same shape, tables valued in the
// dual set.
class DualStructure {
public:
    DualStructure(std::shared_ptr<const Signature> sig, std::vector<std::string> universe);

    const Signature& sig() const { return *sig_; }
    const std::vector<std::string>& universe() const { return universe_; }
    std::size_t size() const { return universe_.size(); }

    void set_pred(const std::string& name, std::vector<DualTruthValue> table);
    void set_func(const std::string& name, std::vector<std::size_t> table);
    void set_const(const std::string& name, std::size_t element);

    DualTruthValue pred_value(const std::string& name, const std::vector<std::size_t>& tuple) const;
    const std::vector<DualTruthValue>& pred_table(const std::string& name) const;
    std::size_t func_value(const std::string& name, const std::vector<std::size_t>& tuple) const;
    std::size_t const_value(const std::string& name) const;

    std::size_t tuple_index(const std::vector<std::size_t>& tuple) const;

private:
    std::shared_ptr<const Signature> sig_;
    std::vector<std::string> universe_;
    std::map<std::string, std::vector<DualTruthValue>> preds_;
    std::map<std::string, std::vector<std::size_t>> funcs_;
    std::map<std::string, std::size_t> consts_;
};

// Pointwise application of u to every predicate table.
DualStructure to_dual(const Structure& m);

// Evaluation over a dual structure: conjunction is min, implication jumps
// to (1,1) when the antecedent is below the consequent, the universal
// quantifier is inf, the existential sup. Satisfies
// eval_dual(to_dual(M), f) == u(eval_formula(M, f)).
DualTruthValue eval_dual(const DualStructure& m, const Assignment& env, const Formula& f);

// Copy of m whose signature gains a fresh constant per element, named
// "c_<element>"; used for element-parameter enumeration.
Structure with_named_elements(const Structure& m);

// Deterministic stream of sentences over the signature: depth counts
// connectives and quantifiers, rational constants come from pool, bound
// variables are v1, v2, ... by nesting level, and terms nest function
// symbols at most one deep. Ordered by depth, then by constant pool order
// and construction (rational, atom, /\, ->, forall, exists); truncated
// to at most budget sentences.
std::vector<Formula> enumerate_sentences(const Signature& sig, std::size_t depth,
                                         const std::vector<Rational>& pool, std::size_t budget,
                                         std::size_t max_free_vars = 0);

// Members of the bounded sentence stream that m satisfies.
std::vector<Formula> theory_of_bounded(const Structure& m, std::size_t depth,
                                       const std::vector<Rational>& pool, std::size_t budget,
                                       bool name_elements);

// Structure files:
//   universe: e1 e2 ...
//   pred P: (e1,e2)=(1/2,3/4) ...     every tuple, row-major order
//   func f: (e1)->e2 ...
//   const c: e1
// '#' comments. Rendering emits exactly this canonical shape.
Structure parse_structure(const std::string& text, std::shared_ptr<const Signature> sig);
std::string render_structure(const Structure& m);
std::string render_dual_structure(const DualStructure& m);

} // namespace gumkit
