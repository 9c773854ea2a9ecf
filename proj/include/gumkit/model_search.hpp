#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gumkit/semantics.hpp"

namespace gumkit {

// Caps for the exhaustive searches. budget counts structures drawn from
// the stream; constant_pool, sentence_depth and the budget also drive
// the sentence enumeration of the comparison operations.
struct SearchBounds {
    std::size_t max_universe = 1;
    std::int64_t grid_denominator = 1;
    std::vector<Rational> constant_pool;
    std::size_t sentence_depth = 2;
    std::size_t max_subset = 2;
    std::uint64_t budget = std::uint64_t{1} << 20;
};

// Ascending lexicographic list of the denominator-D truth values: pairs
// (p/D, q/D) with the excluded (0, positive) corner left out.
std::vector<TruthValue> grid_points(std::int64_t denominator);

// Exhaustive deterministic stream of grid structures over a signature:
// universe sizes 1..max_universe with elements e1, e2, ...; per size,
// one cell per predicate table entry (declaration order, row-major) over
// the ascending grid, then function entries and constants over the
// universe order. The final cell varies fastest, so the very first
// structure is all-(0,0) tables pointing at e1. next() returns nothing
// once the stream ends or the budget is spent; budget_exhausted() tells
// the two apart.
class StructureEnumerator {
public:
    StructureEnumerator(std::shared_ptr<const Signature> sig, const SearchBounds& bounds);

    std::optional<Structure> next();
    bool budget_exhausted() const { return exhausted_; }
    std::uint64_t produced() const { return produced_; }

private:
    void start_size(std::size_t u);
    bool advance();
    Structure build() const;

    std::shared_ptr<const Signature> sig_;
    SearchBounds bounds_;
    std::vector<TruthValue> grid_;
    std::size_t universe_ = 0; // current size, 0 before the first call
    std::vector<std::string> names_;
    std::vector<std::size_t> digits_;
    std::vector<std::size_t> radix_;
    std::size_t pred_cells_ = 0;
    bool exhausted_ = false;
    std::uint64_t produced_ = 0;
};

enum class VerdictKind { Found, RefutedBy, NoneWithinBounds };

// Outcome of a bounded search. Found and RefutedBy carry the structure;
// NoneWithinBounds never claims more than the scanned space, and
// budget_cut records whether the budget stopped the scan before the
// bounded space was fully covered.
struct BoundedVerdict {
    VerdictKind kind = VerdictKind::NoneWithinBounds;
    std::optional<Structure> structure;
    bool budget_cut = false;
};

// First structure modelling every sentence of the theory.
BoundedVerdict find_model(std::shared_ptr<const Signature> sig, const std::vector<Formula>& theory,
                          const SearchBounds& bounds);

// First model of the theory that does not satisfy phi.
BoundedVerdict check_entailment(std::shared_ptr<const Signature> sig,
                                const std::vector<Formula>& theory, const Formula& phi,
                                const SearchBounds& bounds);

// First structure where phi evaluates strictly above every sentence of
// the theory, which must be nonempty.
BoundedVerdict check_strong_entailment(std::shared_ptr<const Signature> sig,
                                       const std::vector<Formula>& theory, const Formula& phi,
                                       const SearchBounds& bounds);

// Smallest sufficient fragment of a theory: subsets of size 1..max_subset
// (size ascending, then lexicographic by member index) are searched for
// one whose entailment of (1/n)-bar -> phi survives the bounded
// countermodel search, double-checked by an independent re-scan of the
// structure space.
struct ApproxResult {
    bool found = false;
    std::vector<Formula> subset;
};
ApproxResult check_approx_entailment(std::shared_ptr<const Signature> sig,
                                     const std::vector<Formula>& theory, const Formula& phi,
                                     std::int64_t n, const SearchBounds& bounds);

struct NotOrderPreserving : std::invalid_argument {
    NotOrderPreserving(std::pair<TruthValue, TruthValue> lower,
                       std::pair<TruthValue, TruthValue> upper);
    std::pair<TruthValue, TruthValue> lower, upper;
};

struct AnchorConflict : std::invalid_argument {
    AnchorConflict(std::pair<TruthValue, TruthValue> lower, std::pair<TruthValue, TruthValue> upper);
    std::pair<TruthValue, TruthValue> lower, upper;
};

struct DomainNotClosed : std::invalid_argument {
    explicit DomainNotClosed(TruthValue missing);
    TruthValue missing;
};

// Strictly increasing partial self-map of the truth values, pinned to
// the identity on its anchor rationals' diagonal points. apply() maps
// domain members exactly; a value strictly between two domain points of
// its own first coordinate is carried by linear interpolation, anything
// else raises DomainNotClosed.
class OrderMap {
public:
    const std::vector<std::pair<TruthValue, TruthValue>>& graph() const { return graph_; }
    const std::vector<Rational>& anchors() const { return anchors_; }
    bool in_domain(const TruthValue& v) const;
    TruthValue apply(const TruthValue& v) const;
    bool moves_any() const;

private:
    friend OrderMap construct_order_map(std::vector<std::pair<TruthValue, TruthValue>> pattern,
                                        std::vector<Rational> anchors);
    std::vector<std::pair<TruthValue, TruthValue>> graph_; // ascending by source
    std::vector<Rational> anchors_;
};

// Merges the pattern with the anchors' identity pairs and validates
// strict monotonicity; a violation touching an anchor pair raises
// AnchorConflict, any other NotOrderPreserving.
OrderMap construct_order_map(std::vector<std::pair<TruthValue, TruthValue>> pattern,
                             std::vector<Rational> anchors);

// Predicate values attained anywhere in the structure, plus (0,0) —
// everything evaluation can reach from them under max, min and the
// residuum. Ascending, without duplicates.
std::vector<TruthValue> attained_values(const Structure& m);

// Copy of the structure with every predicate value passed through the
// map; functions and constants stay. The map must cover every attained
// value (DomainNotClosed otherwise).
Structure h_remap(const Structure& m, const OrderMap& h);

// Qualities of a map between two structures over one signature:
// embedding (functions and constants commute with the map, atomic values
// carry over exactly), weak_elementary (equal first evaluation
// coordinates on the enumerated formulas with up to two parameters),
// elementary (equal values there). elementary implies weak_elementary;
// exact atomic carry-over can fail while degrees agree, so embedding is
// its own claim. The witness belongs to the first stage that breaks, in
// the order above, and the formula stages only speak for the enumerated
// fragment.
struct MapClassification {
    bool embedding = false;
    bool weak_elementary = false;
    bool elementary = false;
    std::string failed_stage;               // embedding | weak-elementary | elementary | empty
    std::string witness_symbol;             // embedding failures
    std::optional<Formula> witness_formula; // formula-stage failures
    std::vector<std::size_t> witness_tuple; // arguments on the left structure
};
MapClassification classify_map(const Structure& m, const Structure& n,
                               const std::vector<std::size_t>& j, const SearchBounds& bounds);

// Compares truth degrees over the bounded sentence stream; the first
// differing sentence is the witness.
struct WeakEquivVerdict {
    bool indistinguishable = false;
    std::optional<Formula> witness;
    Rational degree_left;
    Rational degree_right;
};
WeakEquivVerdict weak_equiv_bounded(const Structure& m, const Structure& n,
                                    const SearchBounds& bounds);

// Number of evaluation workers for the structure scans: GUMKIT_THREADS
// when set to a positive value, otherwise picked from the hardware. The
// scan result never depends on it.
std::size_t worker_count();

} // namespace gumkit
