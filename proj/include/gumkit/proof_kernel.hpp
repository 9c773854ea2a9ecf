#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gumkit/syntax.hpp"

namespace gumkit {

// Axiom schemas of the Hilbert system. G0 makes the truth constant 0
// provable (phi -> 0 holds because (0,0) is the least value); G1..G7 are
// the propositional axioms, GQ_* the quantifier axioms, RGL* pin the
// rational constants, and S*/WE* are the metric axioms, admissible only
// for signatures with a distinguished metric predicate.
enum class SchemaId {
    G0,
    G1,
    G2,
    G3,
    G4,
    G5,
    G6,
    G7,
    GQ_A1,
    GQ_A2,
    GQ_A3,
    GQ_E1,
    GQ_E2,
    RGL1,
    RGL2_GE,
    RGL2_LT,
    RGL3,
    S1,
    S2,
    S3,
    WE1,
    WE2,
};

inline constexpr SchemaId all_schemas[] = {
    SchemaId::G0,      SchemaId::G1,      SchemaId::G2,    SchemaId::G3,  SchemaId::G4,
    SchemaId::G5,      SchemaId::G6,      SchemaId::G7,    SchemaId::GQ_A1, SchemaId::GQ_A2,
    SchemaId::GQ_A3,   SchemaId::GQ_E1,   SchemaId::GQ_E2, SchemaId::RGL1, SchemaId::RGL2_GE,
    SchemaId::RGL2_LT, SchemaId::RGL3,    SchemaId::S1,    SchemaId::S2,  SchemaId::S3,
    SchemaId::WE1,     SchemaId::WE2,
};

const char* schema_name(SchemaId id);
std::optional<SchemaId> schema_from_name(const std::string& name);

// S*/WE* presuppose the metric predicate and moduli.
bool schema_requires_uml(SchemaId id);

// Value bound to a schema metavariable. Which kinds a schema expects is
// fixed per schema (see schema_metas).
class MetaValue {
public:
    enum class Kind { FormulaV, TermV, VariableV, RationalV, NaturalV, SymbolV };

    static MetaValue of_formula(Formula f);
    static MetaValue of_term(TermPtr t);
    static MetaValue of_variable(std::string name);
    static MetaValue of_rational(Rational r);
    static MetaValue of_natural(unsigned long n);
    static MetaValue of_symbol(std::string name);

    Kind kind() const { return kind_; }
    const Formula& formula() const;
    const TermPtr& term() const;
    const std::string& name() const; // VariableV and SymbolV
    const Rational& rational() const;
    unsigned long natural() const;

    std::string str() const;

private:
    Kind kind_ = Kind::FormulaV;
    std::optional<Formula> formula_;
    TermPtr term_;
    std::string name_;
    Rational rational_;
    unsigned long natural_ = 0;
};

using Substitution = std::map<std::string, MetaValue>;

// Metavariable names a schema instantiates, in canonical render order,
// with the expected kind for each.
const std::vector<std::pair<std::string, MetaValue::Kind>>& schema_metas(SchemaId id);

// The (desugared) formula of one schema instance. Throws
// std::invalid_argument on missing or ill-typed metavariables or a
// violated side condition (freeness, substitutability, constant
// relations, missing modulus).
Formula schema_instance(SchemaId id, const Substitution& subst, const Signature& sig);

// All schemas whose statement shape this (desugared) formula instantiates,
// side conditions included. Empty list when none match. WE1/WE2 instances
// are recognized with their canonical bound variables x1..xk, y1..yk only.
std::vector<std::pair<SchemaId, Substitution>> match_axiom(const Formula& f,
                                                           const Signature& sig);

struct Justification {
    enum class Kind { Axiom, Hyp, Extra, MP, Gen };

    static Justification axiom(SchemaId id, std::optional<Substitution> subst = std::nullopt);
    static Justification hyp(std::size_t index);
    static Justification extra(std::size_t index);
    static Justification mp(std::size_t premise, std::size_t implication);
    static Justification gen(std::size_t premise, std::string variable);

    Kind kind = Kind::Axiom;
    SchemaId schema = SchemaId::G1;
    std::optional<Substitution> subst; // absent: checker falls back to match_axiom
    std::size_t index = 0;             // Hyp/Extra: position in the list
    std::size_t premise = 0;           // MP/Gen: 0-based earlier line
    std::size_t implication = 0;       // MP: 0-based earlier line holding the implication
    std::string variable;              // Gen
};

struct ProofLine {
    Formula formula; // stored desugared
    Justification how;
};

struct Proof {
    std::shared_ptr<const Signature> sig;
    std::vector<Formula> theory;
    std::vector<Formula> extra; // hypotheses beyond the theory
    std::vector<ProofLine> lines;

    const Formula& conclusion() const;
};

// bad_line is 1-based; 0 with valid=false marks a proof-level defect
// (e.g. a hypothesis that is not a sentence).
struct CheckReport {
    bool valid = false;
    std::size_t bad_line = 0;
    std::string reason;
};

CheckReport check_proof(const Proof& p);

// Incremental proof construction. Lines are appended; every justification
// is validated on the spot, so a finished build passes check_proof by
// construction. Indices are 0-based.
class ProofBuilder {
public:
    explicit ProofBuilder(std::shared_ptr<const Signature> sig, std::vector<Formula> theory = {},
                          std::vector<Formula> extra = {});

    std::size_t axiom(SchemaId id, Substitution subst);
    std::size_t hyp(std::size_t index);
    std::size_t extra_hyp(std::size_t index);
    std::size_t mp(std::size_t premise, std::size_t implication);
    std::size_t gen(std::size_t premise, const std::string& variable);

    std::size_t size() const { return proof_.lines.size(); }
    const Formula& formula(std::size_t line) const;

    // Derived multi-line steps (return the index of their final line).
    std::size_t refl(const Formula& f);                       // f -> f
    std::size_t chain(std::size_t ab, std::size_t bc);        // A->B, B->C  =>  A->C
    std::size_t g5_forward(const Formula& a, const Formula& b,
                           const Formula& c);                 // (a->(b->c)) -> ((a/\b)->c)
    std::size_t g5_backward(const Formula& a, const Formula& b,
                            const Formula& c);                // ((a/\b)->c) -> (a->(b->c))
    std::size_t weakening(const Formula& a, const Formula& b);   // a -> (b->a)
    std::size_t pair_intro(const Formula& a, const Formula& b);  // a -> (b->(a/\b))
    std::size_t internal_mp(const Formula& a, const Formula& b); // (a/\(a->b)) -> b
    std::size_t assertion(const Formula& a, const Formula& b);   // a -> ((a->b)->b)
    std::size_t mp_under(std::size_t xa, std::size_t xac); // X->A, X->(A->C)  =>  X->C

    Proof take() &&;

private:
    Proof proof_;
    std::size_t append(Formula f, Justification how);
};

// Rebuilds a proof of T |- hypothesis -> conclusion from a proof of
// T + {hypothesis} |- conclusion. The hypothesis must be a sentence
// listed among the proof's extra hypotheses; it is dropped from the
// output, other extra hypotheses stay. Throws std::invalid_argument when
// the input does not check or the hypothesis is not present.
Proof deduction_transform(const Proof& p, const Formula& hypothesis);

// Machine-checked proofs of the core derived laws. Names and argument
// counts:
//   "refl" (phi)            phi -> phi
//   "i"    (phi, psi)       phi -> (psi -> phi)
//   "ii"   (phi, psi)       phi -> (psi -> (phi /\ psi))
//   "iii"  (phi)            (0 -> phi) -> phi
//   "iv"   (phi, psi)       phi, psi |- phi /\ psi
//   "v"    (phi, psi, chi)  phi->psi, psi->chi |- phi->chi
//   "vi"   (phi, psi)       ((phi->psi)->(psi->phi)) -> (psi->phi)
//   "vii"  (phi, psi)       phi -> (phi \/ psi)
//   "viii" (phi, psi, chi)  (phi->psi)->chi |- (psi->phi) \/ chi
// Rules ("iv", "v", "viii") carry their premises as extra hypotheses.
// Throws std::invalid_argument on an unknown name or wrong argument count.
Proof lemma_proof(const std::string& name, const std::vector<Formula>& args,
                  std::shared_ptr<const Signature> sig);

// Proof file format ('#' comments allowed):
//   extra: <sentence>                     0+ header lines, in index order
//   1. <formula> ; axiom G1 phi=..., psi=..., chi=...
//   2. <formula> ; hyp 0                  0-based theory index
//   3. <formula> ; extra 0                0-based extra-hypothesis index
//   4. <formula> ; mp 1 2                 1-based line numbers
//   5. <formula> ; gen 4 x
// Axiom metavariable bindings are optional; without them the checker
// falls back to match_axiom. Line numbers must run 1..n.
Proof parse_proof(const std::string& text, std::shared_ptr<const Signature> sig,
                  std::vector<Formula> theory);
std::string render_proof(const Proof& p);

} // namespace gumkit
