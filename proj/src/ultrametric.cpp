#include "gumkit/ultrametric.hpp"

#include <algorithm>
#include <limits>

namespace gumkit {

namespace {

std::string witness_message(const LawWitness& w) {
    std::string msg = "law " + w.law + " fails";
    if (!w.symbol.empty()) msg += " for " + w.symbol;
    return msg;
}

const Signature::PredSym& metric_symbol(const Structure& m) {
    const auto* d = m.sig().find_pred(m.sig().metric_name);
    if (!d || d->arity != 2)
        throw std::invalid_argument("signature has no binary metric predicate '" +
                                    m.sig().metric_name + "'");
    return *d;
}

// Number of arity-length tuples over the universe.
std::size_t tuple_count(const Structure& m, std::size_t arity) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < arity; ++i) n *= m.size();
    return n;
}

Modulus modulus_or_default(const std::optional<Modulus>& mod) {
    return mod ? *mod : Modulus::linear(1, 0);
}

// Least level n with out > (1/n, 1/n), i.e. the first level whose "<="
// reading already breaks; nullopt when out fits under every level's
// bound that the premise reaches (cap levels above limit are not
// consulted by the caller). out must not be (0,0).
std::optional<std::int64_t> first_weak_break(const TruthValue& out, std::int64_t limit) {
    const Rational& x = out.first();
    const std::int64_t k = x.den() / x.num();
    std::int64_t level;
    if (x.den() % x.num() == 0) {
        // 1/k equals the first coordinate; the second decides level k.
        level = out.second() > Rational(1, k) ? k : k + 1;
    } else {
        level = k + 1;
    }
    if (level > limit) return std::nullopt;
    return level;
}

// Continuity verdict for one argument-tuple pair of one symbol.
struct PairVerdict {
    bool strict = true;
    bool weak = true;
    std::optional<std::int64_t> n; // witness level when failing
    TruthValue bound;              // the bound lhs was held to
};

PairVerdict judge_pair(const TruthValue& dist, const TruthValue& out, const Modulus& delta) {
    PairVerdict v;
    const auto ceiling = premise_ceiling(dist, delta);
    if (ceiling && *ceiling == 0) return v; // no level constrains this pair
    if (!ceiling) {
        // Premise at every level: only (0,0) sits below every bound.
        if (out != TruthValue::zero()) {
            v.strict = v.weak = false;
            v.bound = TruthValue::zero();
        }
        return v;
    }
    const TruthValue tightest = TruthValue::hat(Rational(1, *ceiling));
    if (out < tightest) return v;
    v.strict = false;
    if (const auto level = first_weak_break(out, *ceiling)) {
        v.weak = false;
        v.n = *level;
        v.bound = TruthValue::hat(Rational(1, *level));
    } else {
        // out equals the tightest bound exactly: strictness alone breaks.
        v.n = *ceiling;
        v.bound = tightest;
    }
    return v;
}

} // namespace

NotUniformlyContinuous::NotUniformlyContinuous(LawWitness w)
    : std::runtime_error(witness_message(w)), witness(std::move(w)) {}

TruthValue metric_value(const Structure& m, std::size_t a, std::size_t b) {
    return m.pred_value(metric_symbol(m).name, {a, b});
}

TruthValue product_metric(const Structure& m, const std::vector<std::size_t>& a,
                          const std::vector<std::size_t>& b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("product_metric: tuples must have equal length >= 1");
    TruthValue out = TruthValue::zero();
    for (std::size_t i = 0; i < a.size(); ++i)
        out = tv_max(out, metric_value(m, a[i], b[i]));
    return out;
}

std::optional<std::int64_t> premise_ceiling(const TruthValue& dist, const Modulus& delta) {
    if (dist == TruthValue::zero()) return std::nullopt;
    const std::int64_t a = delta.tail_a();
    const std::int64_t b = delta.tail_b();
    // An eventually constant modulus tops out at b; a distance under that
    // limit's bound passes at every level.
    if (a == 0 && dist < TruthValue::hat(Rational(1, std::max<std::int64_t>(b, 1))))
        return std::nullopt;
    const auto premise = [&](std::int64_t n) {
        if (a > 0 && n > (std::numeric_limits<std::int64_t>::max() - b) / a) {
            // delta(n) would top any representable denominator of dist.
            return false;
        }
        return dist < TruthValue::hat(Rational(1, delta(n)));
    };
    if (!premise(1)) return 0;
    std::int64_t lo = 1;
    std::int64_t hi = 2;
    while (premise(hi)) {
        lo = hi;
        if (hi > std::numeric_limits<std::int64_t>::max() / 2)
            throw std::logic_error("premise_ceiling: no failing level found");
        hi *= 2;
    }
    while (lo + 1 < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (premise(mid) ? lo : hi) = mid;
    }
    return lo;
}

ValidationReport validate_pseudo_ultrametric(const Structure& m) {
    metric_symbol(m);
    ValidationReport report;
    report.pass = true;
    report.separated = true;
    const std::size_t u = m.size();
    for (std::size_t i = 0; i < u; ++i) {
        const TruthValue v = metric_value(m, i, i);
        if (v != TruthValue::zero())
            report.witnesses.push_back({"diagonal", "", {i}, std::nullopt, v, TruthValue::zero()});
    }
    for (std::size_t i = 0; i < u; ++i)
        for (std::size_t j = i + 1; j < u; ++j) {
            const TruthValue ij = metric_value(m, i, j);
            const TruthValue ji = metric_value(m, j, i);
            if (ij != ji)
                report.witnesses.push_back({"symmetry", "", {i, j}, std::nullopt, ij, ji});
            if (ij == TruthValue::zero() && i != j) report.separated = false;
        }
    for (std::size_t i = 0; i < u; ++i)
        for (std::size_t j = 0; j < u; ++j)
            for (std::size_t k = 0; k < u; ++k) {
                const TruthValue lhs = metric_value(m, i, j);
                const TruthValue rhs = tv_max(metric_value(m, i, k), metric_value(m, j, k));
                if (lhs > rhs)
                    report.witnesses.push_back(
                        {"strong-triangle", "", {i, j, k}, std::nullopt, lhs, rhs});
            }
    report.pass = report.witnesses.empty();
    report.weak_pass = report.pass;
    if (!report.pass) report.separated = false;
    return report;
}

ValidationReport check_uniform_continuity(const Structure& m) {
    ValidationReport report = validate_pseudo_ultrametric(m);
    if (!report.pass) return report;
    const auto check_symbol = [&](const std::string& name, std::size_t arity,
                                  const std::optional<Modulus>& mod, bool is_pred) {
        if (arity == 0) return;
        const Modulus delta = modulus_or_default(mod);
        const std::size_t tuples = tuple_count(m, arity);
        for (std::size_t ta = 0; ta < tuples; ++ta) {
            const std::vector<std::size_t> lhs = m.tuple_at(ta, arity);
            for (std::size_t tb = ta + 1; tb < tuples; ++tb) {
                const std::vector<std::size_t> rhs = m.tuple_at(tb, arity);
                const TruthValue dist = product_metric(m, lhs, rhs);
                const TruthValue out =
                    is_pred ? tv_dmax(m.pred_value(name, lhs), m.pred_value(name, rhs))
                            : metric_value(m, m.func_value(name, lhs), m.func_value(name, rhs));
                const PairVerdict v = judge_pair(dist, out, delta);
                if (v.strict) continue;
                report.pass = false;
                if (!v.weak) report.weak_pass = false;
                LawWitness w{"continuity", name, lhs, v.n, out, v.bound};
                w.elements.insert(w.elements.end(), rhs.begin(), rhs.end());
                report.witnesses.push_back(std::move(w));
            }
        }
    };
    for (const auto& p : m.sig().predicates) check_symbol(p.name, p.arity, p.modulus, true);
    for (const auto& f : m.sig().functions) check_symbol(f.name, f.arity, f.modulus, false);
    return report;
}

Quotient quotient(const Structure& m) {
    const ValidationReport report = check_uniform_continuity(m);
    if (!report.pass) {
        if (report.witnesses.empty())
            throw std::logic_error("quotient: failing report carries no witness");
        throw NotUniformlyContinuous(report.witnesses.front());
    }
    const std::size_t u = m.size();
    std::vector<std::size_t> reps;
    std::vector<std::size_t> projection(u);
    for (std::size_t e = 0; e < u; ++e) {
        std::size_t cls = reps.size();
        for (std::size_t c = 0; c < reps.size(); ++c)
            if (metric_value(m, e, reps[c]) == TruthValue::zero()) {
                cls = c;
                break;
            }
        if (cls == reps.size()) reps.push_back(e);
        projection[e] = cls;
    }
    std::vector<std::string> names;
    names.reserve(reps.size());
    for (const std::size_t r : reps) names.push_back(m.universe()[r]);
    Structure q(m.sig_ptr(), std::move(names));
    // Tables read off the class representatives; uniform continuity makes
    // any other member choice give the same classes and values.
    const auto rep_tuple = [&](const std::vector<std::size_t>& classes) {
        std::vector<std::size_t> tuple(classes.size());
        for (std::size_t i = 0; i < classes.size(); ++i) tuple[i] = reps[classes[i]];
        return tuple;
    };
    for (const auto& p : m.sig().predicates) {
        std::vector<TruthValue> table(tuple_count(q, p.arity));
        for (std::size_t t = 0; t < table.size(); ++t)
            table[t] = m.pred_value(p.name, rep_tuple(q.tuple_at(t, p.arity)));
        q.set_pred(p.name, std::move(table));
    }
    for (const auto& f : m.sig().functions) {
        std::vector<std::size_t> table(tuple_count(q, f.arity));
        for (std::size_t t = 0; t < table.size(); ++t)
            table[t] = projection[m.func_value(f.name, rep_tuple(q.tuple_at(t, f.arity)))];
        q.set_func(f.name, std::move(table));
    }
    for (const auto& c : m.sig().constants) q.set_const(c, projection[m.const_value(c)]);
    q.validate();
    return {std::move(q), std::move(projection)};
}

} // namespace gumkit
