#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gumkit/semantics.hpp"

namespace gumkit {

// One broken law instance, re-checkable by evaluating the named law on
// the listed elements. For "continuity" witnesses, symbol names the
// predicate or function under test, elements holds the two argument
// tuples back to back, and n is the level at which the conclusion broke
// (absent when the premise holds at every level, which forces the
// outputs to coincide exactly).
struct LawWitness {
    std::string law;                   // diagonal | symmetry | strong-triangle | continuity
    std::string symbol;                // continuity only; empty for the metric laws
    std::vector<std::size_t> elements; // offending element indices
    std::optional<std::int64_t> n;     // continuity only: failing level, if finite
    TruthValue lhs;                    // the value that broke the bound
    TruthValue rhs;                    // the bound it broke
};

// pass is the strict reading of the continuity conclusion ("<");
// weak_pass relaxes it to "<=" and is implied by pass. The plain metric
// laws count against both alike. separated additionally reports the law
// d(a,b) = (0,0)  =>  a = b, on top of pass.
struct ValidationReport {
    bool pass = false;
    bool weak_pass = false;
    bool separated = false;
    std::vector<LawWitness> witnesses; // lexicographic scan order
};

struct NotUniformlyContinuous : std::runtime_error {
    explicit NotUniformlyContinuous(LawWitness w);
    LawWitness witness;
};

// d-distance of two elements.
TruthValue metric_value(const Structure& m, std::size_t a, std::size_t b);

// Coordinatewise lexicographic max of d-distances; the tuples must have
// equal length >= 1.
TruthValue product_metric(const Structure& m, const std::vector<std::size_t>& a,
                          const std::vector<std::size_t>& b);

// Largest level n >= 1 with dist < (1/delta(n), 1/delta(n)): 0 when even
// n = 1 fails, nullopt when every level passes — dist is (0,0), or delta
// is eventually constant and dist undercuts its limit value. Levels with
// a passing premise form a prefix of 1, 2, ... because delta never
// decreases, so the answer is found by doubling and bisecting.
std::optional<std::int64_t> premise_ceiling(const TruthValue& dist, const Modulus& delta);

// Laws d(a,a) = (0,0), d(a,b) = d(b,a) and
// d(a,b) <= max{d(a,c), d(b,c)}, checked over the whole universe. A
// strong-triangle witness (a, b, c) means d(a,b) overshot the max.
ValidationReport validate_pseudo_ultrametric(const Structure& m);

// validate_pseudo_ultrametric, then the modulus law for every symbol of
// arity >= 1, the metric itself included: whenever two argument tuples
// are closer than (1/delta(n))-hat, the outputs must be closer than
// (1/n)-hat. Output distance is the d-distance for functions and the
// "equal or else max" difference for predicates. Only the largest level
// the premise admits is evaluated; the smaller ones follow from it.
// Symbols without a modulus are held to linear 1 0. A failed metric-law
// report is returned as is, with the continuity checks not attempted.
ValidationReport check_uniform_continuity(const Structure& m);

// Collapse of d-indistinguishable elements. projection maps old element
// indices to class indices; classes are numbered by first appearance and
// named after their first member. Passing check_uniform_continuity makes
// every class table independent of the members chosen to fill it; when
// the check fails, its first witness is rethrown as
// NotUniformlyContinuous.
struct Quotient {
    Structure structure;
    std::vector<std::size_t> projection;
};
Quotient quotient(const Structure& m);

} // namespace gumkit
