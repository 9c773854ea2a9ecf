#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gumkit/rational.hpp"

namespace gumkit {

// position is a character offset for single-line inputs and a 1-based
// line number for file-shaped inputs.
struct ParseError : std::runtime_error {
    ParseError(std::size_t pos, const std::string& msg)
        : std::runtime_error(msg + " (at " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

// Modulus of uniform continuity: a nondecreasing map from positive
// naturals to positive naturals, either linear (a*n + b) or a finite
// table with a linear tail.
class Modulus {
public:
    static Modulus linear(std::int64_t a, std::int64_t b);
    static Modulus table(std::vector<std::pair<std::int64_t, std::int64_t>> entries,
                         std::int64_t tail_a, std::int64_t tail_b);

    std::int64_t operator()(std::int64_t n) const;

    bool is_linear() const { return entries_.empty(); }
    std::int64_t tail_a() const { return a_; }
    std::int64_t tail_b() const { return b_; }
    const std::vector<std::pair<std::int64_t, std::int64_t>>& entries() const { return entries_; }

    std::string str() const;

private:
    Modulus() = default;
    std::vector<std::pair<std::int64_t, std::int64_t>> entries_; // (n, value), n ascending
    std::int64_t a_ = 1;
    std::int64_t b_ = 0;
};

// First-order signature. In metric mode ("uml mode") a distinguished
// binary predicate d is present and every predicate and function symbol
// carries a modulus.
struct Signature {
    struct PredSym {
        std::string name;
        std::size_t arity = 0;
        std::optional<Modulus> modulus;
    };
    struct FuncSym {
        std::string name;
        std::size_t arity = 0;
        std::optional<Modulus> modulus;
    };

    std::vector<PredSym> predicates;
    std::vector<FuncSym> functions;
    std::vector<std::string> constants;
    bool uml_mode = false;
    std::string metric_name = "d";

    const PredSym* find_pred(const std::string& name) const;
    const FuncSym* find_func(const std::string& name) const;
    bool has_constant(const std::string& name) const;

    // Symbol names unique across all three kinds; in uml mode the metric
    // predicate exists with arity 2 and every symbol has a modulus.
    void validate() const;
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
public:
    enum class Kind { Variable, Constant, Apply };

    static TermPtr variable(std::string name);
    static TermPtr constant(std::string name);
    static TermPtr apply(std::string func, std::vector<TermPtr> args);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const std::vector<TermPtr>& args() const { return args_; }

    std::string str() const;

private:
    Kind kind_ = Kind::Variable;
    std::string name_;
    std::vector<TermPtr> args_;
};

bool term_equal(const TermPtr& a, const TermPtr& b);
void term_variables(const TermPtr& t, std::set<std::string>& out);
TermPtr term_substitute(const TermPtr& t, const std::string& var, const TermPtr& replacement);

class FormulaNode;
using FormulaPtr = std::shared_ptr<const FormulaNode>;

// Formula handle. The first six kinds form the core language; Not, Or,
// Iff and StrongImp are sugar that desugar() rewrites away.
class Formula {
public:
    enum class Kind {
        Rat,       // embedded rational constant
        Atom,      // P(t1,...,tn)
        And,
        Imp,
        Forall,
        Exists,
        Not,       // ~p        == p -> 1
        Or,        // p \/ q    == ((p->q)->q) /\ ((q->p)->p)
        Iff,       // p <-> q   == (p->q) /\ (q->p)
        StrongImp, // p => q    == (q->p) -> q
    };

    Formula() = default;
    explicit Formula(FormulaPtr node) : node_(std::move(node)) {}

    static Formula rat(Rational r);
    static Formula atom(std::string pred, std::vector<TermPtr> args);
    static Formula conj(Formula lhs, Formula rhs);
    static Formula imp(Formula lhs, Formula rhs);
    static Formula forall(std::string var, Formula body);
    static Formula exists(std::string var, Formula body);
    static Formula neg(Formula f);
    static Formula disj(Formula lhs, Formula rhs);
    static Formula iff(Formula lhs, Formula rhs);
    static Formula strong_imp(Formula lhs, Formula rhs);

    bool valid() const { return node_ != nullptr; }
    Kind kind() const;

    const Rational& rat_value() const;
    const std::string& pred_name() const;          // Atom
    const std::vector<TermPtr>& atom_args() const; // Atom
    Formula lhs() const;                           // binary kinds
    Formula rhs() const;
    const std::string& quant_var() const;          // Forall / Exists
    Formula body() const;                          // Forall / Exists / Not

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

    // Total order on formulas (kind, then payload); used for
    // deterministic sets of formulas.
    static int compare(const Formula& a, const Formula& b);

    std::string str() const;

    const FormulaPtr& node() const { return node_; }

private:
    FormulaPtr node_;
};

// The shared immutable node behind Formula handles. Exposed so hot loops
// (evaluation, searches) can walk a tree through plain references via
// Formula::node() instead of paying a refcount bump per child access.
// Binary kinds use left/right; quantifiers and Not keep their body in
// left and the variable in name; atoms use name/args.
class FormulaNode {
public:
    Formula::Kind kind = Formula::Kind::Rat;
    Rational rat;
    std::string name; // predicate or quantified variable
    std::vector<TermPtr> args;
    FormulaPtr left;
    FormulaPtr right;
};

// Rewrites all sugar into the core six kinds. Idempotent.
Formula desugar(const Formula& f);

std::set<std::string> free_variables(const Formula& f);
bool is_sentence(const Formula& f);

struct NotSubstitutable : std::runtime_error {
    NotSubstitutable(const std::string& var, const std::string& quantifier_var)
        : std::runtime_error("term for '" + var + "' would be captured by quantifier on '" +
                             quantifier_var + "'"),
          variable(var), capturing(quantifier_var) {}
    std::string variable;
    std::string capturing;
};

bool substitutable(const Formula& f, const std::string& var, const TermPtr& t);
// Capture-checked substitution of t for every free occurrence of var;
// throws NotSubstitutable instead of renaming.
Formula substitute(const Formula& f, const std::string& var, const TermPtr& t);

// Distinct subformulas of the desugared formula, in preorder.
std::vector<Formula> subformulas(const Formula& f);

// Formula / term concrete syntax, loosest first:
//   formula := iff
//   iff     := imp ("<->" imp)*                left-associative
//   imp     := disj (("->" | "=>") imp)?       right-associative
//   disj    := conj ("\/" conj)*
//   conj    := unary ("/\" unary)*
//   unary   := "~" unary | ("forall"|"exists") IDENT "." unary | atom
//   atom    := IDENT "(" term ("," term)* ")" | IDENT | RATIONAL | "(" formula ")"
// Rationals are INT or INT/INT and must lie in [0,1].
Formula parse_formula(const std::string& text, const Signature& sig);
TermPtr parse_term(const std::string& text, const Signature& sig);

// Signature files: one declaration per line.
//   pred NAME/ARITY [modulus linear A B | modulus table N:V,...,default linear A B]
//   func NAME/ARITY [modulus ...]
//   const NAME
// '#' starts a comment. Declaring a predicate named "d" with arity 2
// switches the signature into uml mode.
Signature parse_signature(const std::string& text);
std::string render_signature(const Signature& sig);

// Theory files: one sentence per line, '#' comments, blank lines ignored.
std::vector<Formula> parse_theory(const std::string& text, const Signature& sig);

} // namespace gumkit
