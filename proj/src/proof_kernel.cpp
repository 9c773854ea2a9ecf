#include "gumkit/proof_kernel.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gumkit {

// ---------------------------------------------------------------------------
// Schema identities
// ---------------------------------------------------------------------------

const char* schema_name(SchemaId id) {
    switch (id) {
    case SchemaId::G0: return "G0";
    case SchemaId::G1: return "G1";
    case SchemaId::G2: return "G2";
    case SchemaId::G3: return "G3";
    case SchemaId::G4: return "G4";
    case SchemaId::G5: return "G5";
    case SchemaId::G6: return "G6";
    case SchemaId::G7: return "G7";
    case SchemaId::GQ_A1: return "GQ_A1";
    case SchemaId::GQ_A2: return "GQ_A2";
    case SchemaId::GQ_A3: return "GQ_A3";
    case SchemaId::GQ_E1: return "GQ_E1";
    case SchemaId::GQ_E2: return "GQ_E2";
    case SchemaId::RGL1: return "RGL1";
    case SchemaId::RGL2_GE: return "RGL2_GE";
    case SchemaId::RGL2_LT: return "RGL2_LT";
    case SchemaId::RGL3: return "RGL3";
    case SchemaId::S1: return "S1";
    case SchemaId::S2: return "S2";
    case SchemaId::S3: return "S3";
    case SchemaId::WE1: return "WE1";
    case SchemaId::WE2: return "WE2";
    }
    throw std::logic_error("schema_name: bad id");
}

std::optional<SchemaId> schema_from_name(const std::string& name) {
    for (SchemaId id : all_schemas)
        if (name == schema_name(id)) return id;
    return std::nullopt;
}

bool schema_requires_uml(SchemaId id) {
    switch (id) {
    case SchemaId::S1:
    case SchemaId::S2:
    case SchemaId::S3:
    case SchemaId::WE1:
    case SchemaId::WE2: return true;
    default: return false;
    }
}

const std::vector<std::pair<std::string, MetaValue::Kind>>& schema_metas(SchemaId id) {
    using K = MetaValue::Kind;
    using Metas = std::vector<std::pair<std::string, K>>;
    static const Metas one_formula = {{"phi", K::FormulaV}};
    static const Metas two_formulas = {{"phi", K::FormulaV}, {"psi", K::FormulaV}};
    static const Metas three_formulas = {
        {"phi", K::FormulaV}, {"psi", K::FormulaV}, {"chi", K::FormulaV}};
    static const Metas subst_metas = {{"phi", K::FormulaV}, {"x", K::VariableV}, {"t", K::TermV}};
    static const Metas bound_metas = {
        {"phi", K::FormulaV}, {"psi", K::FormulaV}, {"x", K::VariableV}};
    static const Metas two_rats = {{"r", K::RationalV}, {"s", K::RationalV}};
    static const Metas one_rat = {{"r", K::RationalV}};
    static const Metas one_var = {{"x", K::VariableV}};
    static const Metas two_vars = {{"x", K::VariableV}, {"y", K::VariableV}};
    static const Metas three_vars = {{"x", K::VariableV}, {"y", K::VariableV}, {"z", K::VariableV}};
    static const Metas func_nat = {{"f", K::SymbolV}, {"n", K::NaturalV}};
    static const Metas pred_nat = {{"P", K::SymbolV}, {"n", K::NaturalV}};

    switch (id) {
    case SchemaId::G0:
    case SchemaId::G4:
    case SchemaId::G7: return one_formula;
    case SchemaId::G2:
    case SchemaId::G3: return two_formulas;
    case SchemaId::G1:
    case SchemaId::G5:
    case SchemaId::G6: return three_formulas;
    case SchemaId::GQ_A1:
    case SchemaId::GQ_E1: return subst_metas;
    case SchemaId::GQ_A2:
    case SchemaId::GQ_A3:
    case SchemaId::GQ_E2: return bound_metas;
    case SchemaId::RGL1:
    case SchemaId::RGL2_GE:
    case SchemaId::RGL2_LT: return two_rats;
    case SchemaId::RGL3: return one_rat;
    case SchemaId::S1: return one_var;
    case SchemaId::S2: return two_vars;
    case SchemaId::S3: return three_vars;
    case SchemaId::WE1: return func_nat;
    case SchemaId::WE2: return pred_nat;
    }
    throw std::logic_error("schema_metas: bad id");
}

// ---------------------------------------------------------------------------
// MetaValue
// ---------------------------------------------------------------------------

MetaValue MetaValue::of_formula(Formula f) {
    MetaValue v;
    v.kind_ = Kind::FormulaV;
    v.formula_ = std::move(f);
    return v;
}

MetaValue MetaValue::of_term(TermPtr t) {
    if (!t) throw std::invalid_argument("MetaValue: null term");
    MetaValue v;
    v.kind_ = Kind::TermV;
    v.term_ = std::move(t);
    return v;
}

MetaValue MetaValue::of_variable(std::string name) {
    MetaValue v;
    v.kind_ = Kind::VariableV;
    v.name_ = std::move(name);
    return v;
}

MetaValue MetaValue::of_rational(Rational r) {
    MetaValue v;
    v.kind_ = Kind::RationalV;
    v.rational_ = r;
    return v;
}

MetaValue MetaValue::of_natural(unsigned long n) {
    MetaValue v;
    v.kind_ = Kind::NaturalV;
    v.natural_ = n;
    return v;
}

MetaValue MetaValue::of_symbol(std::string name) {
    MetaValue v;
    v.kind_ = Kind::SymbolV;
    v.name_ = std::move(name);
    return v;
}

const Formula& MetaValue::formula() const {
    if (kind_ != Kind::FormulaV) throw std::invalid_argument("metavariable is not a formula");
    return *formula_;
}

const TermPtr& MetaValue::term() const {
    if (kind_ != Kind::TermV) throw std::invalid_argument("metavariable is not a term");
    return term_;
}

const std::string& MetaValue::name() const {
    if (kind_ != Kind::VariableV && kind_ != Kind::SymbolV)
        throw std::invalid_argument("metavariable is not a name");
    return name_;
}

const Rational& MetaValue::rational() const {
    if (kind_ != Kind::RationalV) throw std::invalid_argument("metavariable is not a rational");
    return rational_;
}

unsigned long MetaValue::natural() const {
    if (kind_ != Kind::NaturalV) throw std::invalid_argument("metavariable is not a natural");
    return natural_;
}

std::string MetaValue::str() const {
    switch (kind_) {
    case Kind::FormulaV: return formula_->str();
    case Kind::TermV: return term_->str();
    case Kind::VariableV:
    case Kind::SymbolV: return name_;
    case Kind::RationalV: return rational_.str();
    case Kind::NaturalV: return std::to_string(natural_);
    }
    throw std::logic_error("MetaValue: bad kind");
}

// ---------------------------------------------------------------------------
// Schema instantiation
// ---------------------------------------------------------------------------

namespace {

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

const MetaValue& need(const Substitution& s, const char* key, SchemaId id) {
    auto it = s.find(key);
    if (it == s.end())
        throw std::invalid_argument(std::string(schema_name(id)) + " needs metavariable '" +
                                    key + "'");
    return it->second;
}

Formula need_formula(const Substitution& s, const char* key, SchemaId id) {
    return desugar(need(s, key, id).formula());
}

std::string need_variable(const Substitution& s, const char* key, SchemaId id) {
    const std::string& v = need(s, key, id).name();
    if (!is_identifier(v))
        throw std::invalid_argument(std::string(schema_name(id)) + ": '" + v +
                                    "' is not a variable name");
    return v;
}

Rational need_rational(const Substitution& s, const char* key, SchemaId id) {
    return need(s, key, id).rational();
}

Formula metric_atom(const Signature& sig, TermPtr a, TermPtr b) {
    return Formula::atom(sig.metric_name, {std::move(a), std::move(b)});
}

void need_uml(SchemaId id, const Signature& sig) {
    if (!sig.uml_mode)
        throw std::invalid_argument(std::string(schema_name(id)) +
                                    " needs a signature with a metric predicate");
}

// Common statement of WE1/WE2: closeness of the argument tuples up to the
// modulus at n forces closeness (WE1) or equivalence (WE2) of the results
// up to 1/n, stated with canonical bound variables x1..xk, y1..yk.
Formula we_statement(SchemaId id, const Substitution& subst, const Signature& sig) {
    need_uml(id, sig);
    const bool on_predicate = id == SchemaId::WE2;
    const std::string sym = need(subst, on_predicate ? "P" : "f", id).name();
    const unsigned long n_raw = need(subst, "n", id).natural();
    if (n_raw == 0) throw std::invalid_argument("WE: n must be positive");
    if (n_raw > static_cast<unsigned long>(std::numeric_limits<std::int64_t>::max()))
        throw std::invalid_argument("WE: n out of range");
    const auto n = static_cast<std::int64_t>(n_raw);

    std::size_t arity = 0;
    const Modulus* mod = nullptr;
    if (on_predicate) {
        const auto* ps = sig.find_pred(sym);
        if (!ps) throw std::invalid_argument("WE2: unknown predicate '" + sym + "'");
        arity = ps->arity;
        if (ps->modulus) mod = &*ps->modulus;
    } else {
        const auto* fs = sig.find_func(sym);
        if (!fs) throw std::invalid_argument("WE1: unknown function '" + sym + "'");
        arity = fs->arity;
        if (fs->modulus) mod = &*fs->modulus;
    }
    if (arity == 0) throw std::invalid_argument("WE: '" + sym + "' takes no arguments");
    if (!mod) throw std::invalid_argument("WE: '" + sym + "' has no modulus");
    const std::int64_t delta = (*mod)(n);
    if (delta <= 0)
        throw std::invalid_argument("WE: modulus of '" + sym + "' is not positive at n=" +
                                    std::to_string(n));

    std::vector<std::string> xn, yn;
    std::vector<TermPtr> xs, ys;
    for (std::size_t i = 1; i <= arity; ++i) {
        xn.push_back("x" + std::to_string(i));
        yn.push_back("y" + std::to_string(i));
        xs.push_back(Term::variable(xn.back()));
        ys.push_back(Term::variable(yn.back()));
    }
    Formula close = metric_atom(sig, xs[0], ys[0]);
    for (std::size_t i = 1; i < arity; ++i)
        close = Formula::conj(close, metric_atom(sig, xs[i], ys[i]));
    Formula concl = on_predicate
                        ? Formula::iff(Formula::atom(sym, xs), Formula::atom(sym, ys))
                        : metric_atom(sig, Term::apply(sym, xs), Term::apply(sym, ys));
    Formula body = Formula::disj(Formula::imp(close, Formula::rat(Rational(1, delta))),
                                 Formula::imp(Formula::rat(Rational(1, n)), concl));
    for (std::size_t i = arity; i-- > 0;) body = Formula::forall(yn[i], body);
    for (std::size_t i = arity; i-- > 0;) body = Formula::forall(xn[i], body);
    return body;
}

} // namespace

Formula schema_instance(SchemaId id, const Substitution& subst, const Signature& sig) {
    const auto& metas = schema_metas(id);
    for (const auto& [key, value] : subst) {
        auto it = std::find_if(metas.begin(), metas.end(),
                               [&key = key](const auto& m) { return m.first == key; });
        if (it == metas.end())
            throw std::invalid_argument(std::string(schema_name(id)) + " has no metavariable '" +
                                        key + "'");
        if (value.kind() != it->second)
            throw std::invalid_argument(std::string(schema_name(id)) + ": metavariable '" + key +
                                        "' has the wrong kind");
    }

    const Formula zero = Formula::rat(Rational(0));
    const Formula one = Formula::rat(Rational(1));
    Formula stmt;
    switch (id) {
    case SchemaId::G0: {
        stmt = Formula::imp(need_formula(subst, "phi", id), zero);
        break;
    }
    case SchemaId::G1: {
        const Formula phi = need_formula(subst, "phi", id);
        const Formula psi = need_formula(subst, "psi", id);
        const Formula chi = need_formula(subst, "chi", id);
        stmt = Formula::imp(Formula::imp(phi, psi),
                            Formula::imp(Formula::imp(psi, chi), Formula::imp(phi, chi)));
        break;
    }
    case SchemaId::G2: {
        const Formula phi = need_formula(subst, "phi", id);
        const Formula psi = need_formula(subst, "psi", id);
        stmt = Formula::imp(Formula::conj(phi, psi), phi);
        break;
    }
    case SchemaId::G3: {
        const Formula phi = need_formula(subst, "phi", id);
        const Formula psi = need_formula(subst, "psi", id);
        stmt = Formula::imp(Formula::conj(phi, psi), Formula::conj(psi, phi));
        break;
    }
    case SchemaId::G4: {
        const Formula phi = need_formula(subst, "phi", id);
        stmt = Formula::imp(phi, Formula::conj(phi, phi));
        break;
    }
    case SchemaId::G5: {
        const Formula phi = need_formula(subst, "phi", id);
        const Formula psi = need_formula(subst, "psi", id);
        const Formula chi = need_formula(subst, "chi", id);
        stmt = Formula::iff(Formula::imp(phi, Formula::imp(psi, chi)),
                            Formula::imp(Formula::conj(phi, psi), chi));
        break;
    }
    case SchemaId::G6: {
        const Formula phi = need_formula(subst, "phi", id);
        const Formula psi = need_formula(subst, "psi", id);
        const Formula chi = need_formula(subst, "chi", id);
        stmt = Formula::imp(
            Formula::imp(Formula::imp(phi, psi), chi),
            Formula::imp(Formula::imp(Formula::imp(psi, phi), chi), chi));
        break;
    }
    case SchemaId::G7: {
        stmt = Formula::imp(one, need_formula(subst, "phi", id));
        break;
    }
    case SchemaId::GQ_A1:
    case SchemaId::GQ_E1: {
        const Formula phi = need_formula(subst, "phi", id);
        const std::string x = need_variable(subst, "x", id);
        const TermPtr& t = need(subst, "t", id).term();
        if (!substitutable(phi, x, t))
            throw std::invalid_argument(std::string(schema_name(id)) + ": " + t->str() +
                                        " is not substitutable for " + x);
        const Formula inst = substitute(phi, x, t);
        stmt = id == SchemaId::GQ_A1 ? Formula::imp(Formula::forall(x, phi), inst)
                                     : Formula::imp(inst, Formula::exists(x, phi));
        break;
    }
    case SchemaId::GQ_A2:
    case SchemaId::GQ_A3:
    case SchemaId::GQ_E2: {
        const Formula phi = need_formula(subst, "phi", id);
        const Formula psi = need_formula(subst, "psi", id);
        const std::string x = need_variable(subst, "x", id);
        if (free_variables(psi).count(x))
            throw std::invalid_argument(std::string(schema_name(id)) + ": " + x +
                                        " occurs free in psi");
        if (id == SchemaId::GQ_A2)
            stmt = Formula::imp(Formula::forall(x, Formula::imp(psi, phi)),
                                Formula::imp(psi, Formula::forall(x, phi)));
        else if (id == SchemaId::GQ_A3)
            stmt = Formula::imp(Formula::forall(x, Formula::disj(psi, phi)),
                                Formula::disj(psi, Formula::forall(x, phi)));
        else
            stmt = Formula::imp(Formula::exists(x, Formula::imp(psi, phi)),
                                Formula::imp(psi, Formula::exists(x, phi)));
        break;
    }
    case SchemaId::RGL1: {
        const Rational r = need_rational(subst, "r", id);
        const Rational s = need_rational(subst, "s", id);
        stmt = Formula::iff(Formula::conj(Formula::rat(r), Formula::rat(s)),
                            Formula::rat(r >= s ? r : s));
        break;
    }
    case SchemaId::RGL2_GE: {
        const Rational r = need_rational(subst, "r", id);
        const Rational s = need_rational(subst, "s", id);
        if (r < s) throw std::invalid_argument("RGL2_GE needs r >= s");
        stmt = Formula::imp(Formula::rat(r), Formula::rat(s));
        break;
    }
    case SchemaId::RGL2_LT: {
        const Rational r = need_rational(subst, "r", id);
        const Rational s = need_rational(subst, "s", id);
        if (r >= s) throw std::invalid_argument("RGL2_LT needs r < s");
        stmt = Formula::iff(Formula::imp(Formula::rat(r), Formula::rat(s)), Formula::rat(s));
        break;
    }
    case SchemaId::RGL3: {
        const Rational r = need_rational(subst, "r", id);
        if (r >= Rational(1)) throw std::invalid_argument("RGL3 needs r < 1");
        stmt = Formula::imp(Formula::imp(Formula::rat(r), one), one);
        break;
    }
    case SchemaId::S1: {
        need_uml(id, sig);
        const std::string x = need_variable(subst, "x", id);
        stmt = Formula::forall(x, metric_atom(sig, Term::variable(x), Term::variable(x)));
        break;
    }
    case SchemaId::S2: {
        need_uml(id, sig);
        const std::string x = need_variable(subst, "x", id);
        const std::string y = need_variable(subst, "y", id);
        if (x == y) throw std::invalid_argument("S2 needs distinct variables");
        stmt = Formula::forall(
            x, Formula::forall(y, Formula::imp(metric_atom(sig, Term::variable(x),
                                                           Term::variable(y)),
                                               metric_atom(sig, Term::variable(y),
                                                           Term::variable(x)))));
        break;
    }
    case SchemaId::S3: {
        need_uml(id, sig);
        const std::string x = need_variable(subst, "x", id);
        const std::string y = need_variable(subst, "y", id);
        const std::string z = need_variable(subst, "z", id);
        if (x == y || y == z || x == z)
            throw std::invalid_argument("S3 needs distinct variables");
        const TermPtr tx = Term::variable(x), ty = Term::variable(y), tz = Term::variable(z);
        stmt = Formula::forall(
            x, Formula::forall(
                   y, Formula::forall(
                          z, Formula::imp(Formula::conj(metric_atom(sig, tx, ty),
                                                        metric_atom(sig, ty, tz)),
                                          metric_atom(sig, tx, tz)))));
        break;
    }
    case SchemaId::WE1:
    case SchemaId::WE2: {
        stmt = we_statement(id, subst, sig);
        break;
    }
    }
    return desugar(stmt);
}

// ---------------------------------------------------------------------------
// Axiom recognition
// ---------------------------------------------------------------------------

namespace {

bool is_imp(const Formula& f) { return f.kind() == Formula::Kind::Imp; }
bool is_and(const Formula& f) { return f.kind() == Formula::Kind::And; }
bool is_rat(const Formula& f) { return f.kind() == Formula::Kind::Rat; }
bool is_forall(const Formula& f) { return f.kind() == Formula::Kind::Forall; }
bool is_exists(const Formula& f) { return f.kind() == Formula::Kind::Exists; }
bool is_atom(const Formula& f) { return f.kind() == Formula::Kind::Atom; }

// Parallel walk of a quantifier body against a claimed instance, collecting
// the replacement term at every free occurrence of var. False on any
// structural mismatch elsewhere.
bool collect_replacements_term(const TermPtr& bt, const TermPtr& it, const std::string& var,
                               bool shadowed, std::vector<TermPtr>& out) {
    if (!shadowed && bt->kind() == Term::Kind::Variable && bt->name() == var) {
        out.push_back(it);
        return true;
    }
    if (bt->kind() != it->kind() || bt->name() != it->name()) return false;
    if (bt->args().size() != it->args().size()) return false;
    for (std::size_t i = 0; i < bt->args().size(); ++i)
        if (!collect_replacements_term(bt->args()[i], it->args()[i], var, shadowed, out))
            return false;
    return true;
}

bool collect_replacements(const Formula& body, const Formula& inst, const std::string& var,
                          bool shadowed, std::vector<TermPtr>& out) {
    if (body.kind() != inst.kind()) return false;
    switch (body.kind()) {
    case Formula::Kind::Rat: return body.rat_value() == inst.rat_value();
    case Formula::Kind::Atom: {
        if (body.pred_name() != inst.pred_name()) return false;
        const auto& ba = body.atom_args();
        const auto& ia = inst.atom_args();
        if (ba.size() != ia.size()) return false;
        for (std::size_t i = 0; i < ba.size(); ++i)
            if (!collect_replacements_term(ba[i], ia[i], var, shadowed, out)) return false;
        return true;
    }
    case Formula::Kind::And:
    case Formula::Kind::Imp:
        return collect_replacements(body.lhs(), inst.lhs(), var, shadowed, out) &&
               collect_replacements(body.rhs(), inst.rhs(), var, shadowed, out);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
        if (body.quant_var() != inst.quant_var()) return false;
        return collect_replacements(body.body(), inst.body(), var,
                                    shadowed || body.quant_var() == var, out);
    default: return false; // sugar kinds cannot occur in desugared input
    }
}

// The term a quantifier instance substitutes for var, when one exists.
// An unconstrained instance (var not free in the body) reads back as var
// itself.
std::optional<TermPtr> instance_term(const Formula& body, const Formula& inst,
                                     const std::string& var) {
    std::vector<TermPtr> found;
    if (!collect_replacements(body, inst, var, false, found)) return std::nullopt;
    if (found.empty()) return Term::variable(var);
    for (std::size_t i = 1; i < found.size(); ++i)
        if (!term_equal(found[0], found[i])) return std::nullopt;
    return found[0];
}

Substitution formulas_subst(std::initializer_list<std::pair<const char*, Formula>> kv) {
    Substitution s;
    for (const auto& [k, f] : kv) s.emplace(k, MetaValue::of_formula(f));
    return s;
}

} // namespace

std::vector<std::pair<SchemaId, Substitution>> match_axiom(const Formula& f_in,
                                                           const Signature& sig) {
    const Formula f = desugar(f_in);
    std::vector<std::pair<SchemaId, Substitution>> out;
    auto try_add = [&](SchemaId id, Substitution s) {
        try {
            if (schema_instance(id, s, sig) == f) out.emplace_back(id, std::move(s));
        } catch (const std::invalid_argument&) {
        }
    };

    // Propositional shapes.
    if (is_imp(f)) {
        const Formula l = f.lhs(), r = f.rhs();
        if (is_rat(r) && r.rat_value() == Rational(0))
            try_add(SchemaId::G0, formulas_subst({{"phi", l}}));
        if (is_imp(l) && is_imp(r) && is_imp(r.lhs()))
            try_add(SchemaId::G1, formulas_subst({{"phi", l.lhs()},
                                                  {"psi", l.rhs()},
                                                  {"chi", r.lhs().rhs()}}));
        if (is_and(l)) {
            try_add(SchemaId::G2, formulas_subst({{"phi", l.lhs()}, {"psi", l.rhs()}}));
            try_add(SchemaId::G3, formulas_subst({{"phi", l.lhs()}, {"psi", l.rhs()}}));
        }
        if (is_and(r)) try_add(SchemaId::G4, formulas_subst({{"phi", l}}));
        if (is_imp(l) && is_imp(l.lhs()))
            try_add(SchemaId::G6, formulas_subst({{"phi", l.lhs().lhs()},
                                                  {"psi", l.lhs().rhs()},
                                                  {"chi", l.rhs()}}));
        if (is_rat(l) && l.rat_value() == Rational(1))
            try_add(SchemaId::G7, formulas_subst({{"phi", r}}));
    }
    if (is_and(f) && is_imp(f.lhs()) && is_imp(f.lhs().lhs()) && is_imp(f.lhs().lhs().rhs())) {
        const Formula inner = f.lhs().lhs(); // phi -> (psi -> chi)
        try_add(SchemaId::G5, formulas_subst({{"phi", inner.lhs()},
                                              {"psi", inner.rhs().lhs()},
                                              {"chi", inner.rhs().rhs()}}));
    }

    // Quantifier shapes.
    if (is_imp(f) && is_forall(f.lhs())) {
        const Formula all = f.lhs();
        const std::string& x = all.quant_var();
        if (auto t = instance_term(all.body(), f.rhs(), x)) {
            Substitution s = formulas_subst({{"phi", all.body()}});
            s.emplace("x", MetaValue::of_variable(x));
            s.emplace("t", MetaValue::of_term(*t));
            try_add(SchemaId::GQ_A1, std::move(s));
        }
        if (is_imp(all.body())) {
            Substitution s = formulas_subst(
                {{"psi", all.body().lhs()}, {"phi", all.body().rhs()}});
            s.emplace("x", MetaValue::of_variable(x));
            try_add(SchemaId::GQ_A2, std::move(s));
        }
        if (is_and(all.body()) && is_imp(all.body().lhs()) && is_imp(all.body().lhs().lhs())) {
            Substitution s = formulas_subst({{"psi", all.body().lhs().lhs().lhs()},
                                             {"phi", all.body().lhs().lhs().rhs()}});
            s.emplace("x", MetaValue::of_variable(x));
            try_add(SchemaId::GQ_A3, std::move(s));
        }
    }
    if (is_imp(f) && is_exists(f.rhs())) {
        const Formula ex = f.rhs();
        if (auto t = instance_term(ex.body(), f.lhs(), ex.quant_var())) {
            Substitution s = formulas_subst({{"phi", ex.body()}});
            s.emplace("x", MetaValue::of_variable(ex.quant_var()));
            s.emplace("t", MetaValue::of_term(*t));
            try_add(SchemaId::GQ_E1, std::move(s));
        }
    }
    if (is_imp(f) && is_exists(f.lhs()) && is_imp(f.lhs().body())) {
        const Formula ex = f.lhs();
        Substitution s =
            formulas_subst({{"psi", ex.body().lhs()}, {"phi", ex.body().rhs()}});
        s.emplace("x", MetaValue::of_variable(ex.quant_var()));
        try_add(SchemaId::GQ_E2, std::move(s));
    }

    // Rational-constant shapes.
    if (is_and(f) && is_imp(f.lhs())) {
        const Formula l = f.lhs();
        if (is_and(l.lhs()) && is_rat(l.lhs().lhs()) && is_rat(l.lhs().rhs())) {
            Substitution s;
            s.emplace("r", MetaValue::of_rational(l.lhs().lhs().rat_value()));
            s.emplace("s", MetaValue::of_rational(l.lhs().rhs().rat_value()));
            try_add(SchemaId::RGL1, std::move(s));
        }
        if (is_imp(l.lhs()) && is_rat(l.lhs().lhs()) && is_rat(l.lhs().rhs())) {
            Substitution s;
            s.emplace("r", MetaValue::of_rational(l.lhs().lhs().rat_value()));
            s.emplace("s", MetaValue::of_rational(l.lhs().rhs().rat_value()));
            try_add(SchemaId::RGL2_LT, std::move(s));
        }
    }
    if (is_imp(f) && is_rat(f.lhs()) && is_rat(f.rhs())) {
        Substitution s;
        s.emplace("r", MetaValue::of_rational(f.lhs().rat_value()));
        s.emplace("s", MetaValue::of_rational(f.rhs().rat_value()));
        try_add(SchemaId::RGL2_GE, std::move(s));
    }
    if (is_imp(f) && is_imp(f.lhs()) && is_rat(f.lhs().lhs()) && is_rat(f.rhs()) &&
        f.rhs().rat_value() == Rational(1)) {
        Substitution s;
        s.emplace("r", MetaValue::of_rational(f.lhs().lhs().rat_value()));
        try_add(SchemaId::RGL3, std::move(s));
    }

    // Metric shapes. WE instances are recognized with their canonical
    // variable names only.
    if (is_forall(f)) {
        if (is_atom(f.body())) {
            Substitution s;
            s.emplace("x", MetaValue::of_variable(f.quant_var()));
            try_add(SchemaId::S1, std::move(s));
        }
        if (is_forall(f.body()) && is_imp(f.body().body())) {
            Substitution s;
            s.emplace("x", MetaValue::of_variable(f.quant_var()));
            s.emplace("y", MetaValue::of_variable(f.body().quant_var()));
            try_add(SchemaId::S2, std::move(s));
        }
        if (is_forall(f.body()) && is_forall(f.body().body()) &&
            is_imp(f.body().body().body())) {
            Substitution s;
            s.emplace("x", MetaValue::of_variable(f.quant_var()));
            s.emplace("y", MetaValue::of_variable(f.body().quant_var()));
            s.emplace("z", MetaValue::of_variable(f.body().body().quant_var()));
            try_add(SchemaId::S3, std::move(s));
        }

        Formula g = f;
        std::size_t peeled = 0;
        while (is_forall(g)) {
            g = g.body();
            ++peeled;
        }
        if (peeled >= 2 && peeled % 2 == 0 && is_and(g) && is_imp(g.lhs()) &&
            is_imp(g.lhs().lhs()) && is_imp(g.lhs().lhs().rhs()) &&
            is_rat(g.lhs().lhs().rhs().lhs())) {
            const Rational q = g.lhs().lhs().rhs().lhs().rat_value();
            const Formula concl = g.lhs().lhs().rhs().rhs();
            if (q.num() == 1) {
                const auto n = static_cast<unsigned long>(q.den());
                if (is_atom(concl) && concl.atom_args().size() == 2 &&
                    concl.atom_args()[0]->kind() == Term::Kind::Apply) {
                    Substitution s;
                    s.emplace("f", MetaValue::of_symbol(concl.atom_args()[0]->name()));
                    s.emplace("n", MetaValue::of_natural(n));
                    try_add(SchemaId::WE1, std::move(s));
                }
                if (is_and(concl) && is_imp(concl.lhs()) && is_atom(concl.lhs().lhs())) {
                    Substitution s;
                    s.emplace("P", MetaValue::of_symbol(concl.lhs().lhs().pred_name()));
                    s.emplace("n", MetaValue::of_natural(n));
                    try_add(SchemaId::WE2, std::move(s));
                }
            }
        }
    }

    return out;
}

// ---------------------------------------------------------------------------
// Proofs and checking
// ---------------------------------------------------------------------------

Justification Justification::axiom(SchemaId id, std::optional<Substitution> subst) {
    Justification j;
    j.kind = Kind::Axiom;
    j.schema = id;
    j.subst = std::move(subst);
    return j;
}

Justification Justification::hyp(std::size_t index) {
    Justification j;
    j.kind = Kind::Hyp;
    j.index = index;
    return j;
}

Justification Justification::extra(std::size_t index) {
    Justification j;
    j.kind = Kind::Extra;
    j.index = index;
    return j;
}

Justification Justification::mp(std::size_t premise, std::size_t implication) {
    Justification j;
    j.kind = Kind::MP;
    j.premise = premise;
    j.implication = implication;
    return j;
}

Justification Justification::gen(std::size_t premise, std::string variable) {
    Justification j;
    j.kind = Kind::Gen;
    j.premise = premise;
    j.variable = std::move(variable);
    return j;
}

const Formula& Proof::conclusion() const {
    if (lines.empty()) throw std::logic_error("empty proof has no conclusion");
    return lines.back().formula;
}

CheckReport check_proof(const Proof& p) {
    auto fail = [](std::size_t line, const char* reason) {
        return CheckReport{false, line, reason};
    };
    if (!p.sig) return fail(0, "MissingSignature");
    for (const Formula& f : p.theory)
        if (!is_sentence(desugar(f))) return fail(0, "TheoryNotSentence");
    for (const Formula& f : p.extra)
        if (!is_sentence(desugar(f))) return fail(0, "ExtraNotSentence");

    for (std::size_t i = 0; i < p.lines.size(); ++i) {
        const ProofLine& line = p.lines[i];
        const std::size_t n = i + 1;
        switch (line.how.kind) {
        case Justification::Kind::Axiom: {
            if (schema_requires_uml(line.how.schema) && !p.sig->uml_mode)
                return fail(n, "SchemaRequiresUml");
            if (line.how.subst) {
                Formula want;
                try {
                    want = schema_instance(line.how.schema, *line.how.subst, *p.sig);
                } catch (const std::invalid_argument&) {
                    return fail(n, "AxiomMismatch");
                }
                if (want != line.formula) return fail(n, "AxiomMismatch");
            } else {
                const auto matches = match_axiom(line.formula, *p.sig);
                const bool ok =
                    std::any_of(matches.begin(), matches.end(),
                                [&](const auto& m) { return m.first == line.how.schema; });
                if (!ok) return fail(n, "AxiomMismatch");
            }
            break;
        }
        case Justification::Kind::Hyp: {
            if (line.how.index >= p.theory.size()) return fail(n, "BadHypIndex");
            if (desugar(p.theory[line.how.index]) != line.formula)
                return fail(n, "HypMismatch");
            break;
        }
        case Justification::Kind::Extra: {
            if (line.how.index >= p.extra.size()) return fail(n, "BadExtraIndex");
            if (desugar(p.extra[line.how.index]) != line.formula)
                return fail(n, "ExtraMismatch");
            break;
        }
        case Justification::Kind::MP: {
            if (line.how.premise >= i || line.how.implication >= i)
                return fail(n, "BadLineIndex");
            const Formula& imp = p.lines[line.how.implication].formula;
            if (!is_imp(imp) || imp.lhs() != p.lines[line.how.premise].formula ||
                imp.rhs() != line.formula)
                return fail(n, "MPShapeMismatch");
            break;
        }
        case Justification::Kind::Gen: {
            if (line.how.premise >= i) return fail(n, "BadLineIndex");
            if (!is_forall(line.formula) || line.formula.quant_var() != line.how.variable ||
                line.formula.body() != p.lines[line.how.premise].formula)
                return fail(n, "GenShapeMismatch");
            break;
        }
        }
    }
    return CheckReport{true, 0, ""};
}

// ---------------------------------------------------------------------------
// Incremental construction
// ---------------------------------------------------------------------------

ProofBuilder::ProofBuilder(std::shared_ptr<const Signature> sig, std::vector<Formula> theory,
                           std::vector<Formula> extra) {
    if (!sig) throw std::invalid_argument("ProofBuilder: null signature");
    for (const Formula& f : theory)
        if (!is_sentence(desugar(f)))
            throw std::invalid_argument("ProofBuilder: theory formula " + f.str() +
                                        " is not a sentence");
    for (const Formula& f : extra)
        if (!is_sentence(desugar(f)))
            throw std::invalid_argument("ProofBuilder: hypothesis " + f.str() +
                                        " is not a sentence");
    proof_.sig = std::move(sig);
    proof_.theory = std::move(theory);
    proof_.extra = std::move(extra);
}

std::size_t ProofBuilder::append(Formula f, Justification how) {
    proof_.lines.push_back({std::move(f), std::move(how)});
    return proof_.lines.size() - 1;
}

const Formula& ProofBuilder::formula(std::size_t line) const {
    if (line >= proof_.lines.size()) throw std::out_of_range("ProofBuilder: no such line");
    return proof_.lines[line].formula;
}

std::size_t ProofBuilder::axiom(SchemaId id, Substitution subst) {
    Formula f = schema_instance(id, subst, *proof_.sig);
    return append(std::move(f), Justification::axiom(id, std::move(subst)));
}

std::size_t ProofBuilder::hyp(std::size_t index) {
    if (index >= proof_.theory.size())
        throw std::invalid_argument("ProofBuilder: no theory formula " + std::to_string(index));
    return append(desugar(proof_.theory[index]), Justification::hyp(index));
}

std::size_t ProofBuilder::extra_hyp(std::size_t index) {
    if (index >= proof_.extra.size())
        throw std::invalid_argument("ProofBuilder: no hypothesis " + std::to_string(index));
    return append(desugar(proof_.extra[index]), Justification::extra(index));
}

std::size_t ProofBuilder::mp(std::size_t premise, std::size_t implication) {
    const Formula& a = formula(premise);
    const Formula& ab = formula(implication);
    if (!is_imp(ab) || ab.lhs() != a)
        throw std::invalid_argument("ProofBuilder: lines do not fit modus ponens");
    return append(ab.rhs(), Justification::mp(premise, implication));
}

std::size_t ProofBuilder::gen(std::size_t premise, const std::string& variable) {
    if (!is_identifier(variable))
        throw std::invalid_argument("ProofBuilder: '" + variable + "' is not a variable name");
    return append(Formula::forall(variable, formula(premise)),
                  Justification::gen(premise, variable));
}

std::size_t ProofBuilder::refl(const Formula& f_in) {
    const Formula f = desugar(f_in);
    const std::size_t dup = axiom(SchemaId::G4, formulas_subst({{"phi", f}}));
    const std::size_t fst =
        axiom(SchemaId::G2, formulas_subst({{"phi", f}, {"psi", f}}));
    const std::size_t tr = axiom(
        SchemaId::G1,
        formulas_subst({{"phi", f}, {"psi", Formula::conj(f, f)}, {"chi", f}}));
    return mp(fst, mp(dup, tr));
}

std::size_t ProofBuilder::chain(std::size_t ab, std::size_t bc) {
    const Formula& fab = formula(ab);
    const Formula& fbc = formula(bc);
    if (!is_imp(fab) || !is_imp(fbc) || fab.rhs() != fbc.lhs())
        throw std::invalid_argument("ProofBuilder: lines do not fit chaining");
    const std::size_t tr =
        axiom(SchemaId::G1, formulas_subst({{"phi", fab.lhs()},
                                            {"psi", fab.rhs()},
                                            {"chi", fbc.rhs()}}));
    return mp(bc, mp(ab, tr));
}

std::size_t ProofBuilder::g5_forward(const Formula& a_in, const Formula& b_in,
                                     const Formula& c_in) {
    const Formula a = desugar(a_in), b = desugar(b_in), c = desugar(c_in);
    const Formula curried = Formula::imp(a, Formula::imp(b, c));
    const Formula paired = Formula::imp(Formula::conj(a, b), c);
    const std::size_t both =
        axiom(SchemaId::G5, formulas_subst({{"phi", a}, {"psi", b}, {"chi", c}}));
    const std::size_t fst =
        axiom(SchemaId::G2, formulas_subst({{"phi", Formula::imp(curried, paired)},
                                            {"psi", Formula::imp(paired, curried)}}));
    return mp(both, fst);
}

std::size_t ProofBuilder::g5_backward(const Formula& a_in, const Formula& b_in,
                                      const Formula& c_in) {
    const Formula a = desugar(a_in), b = desugar(b_in), c = desugar(c_in);
    const Formula curried = Formula::imp(a, Formula::imp(b, c));
    const Formula paired = Formula::imp(Formula::conj(a, b), c);
    const std::size_t both =
        axiom(SchemaId::G5, formulas_subst({{"phi", a}, {"psi", b}, {"chi", c}}));
    const std::size_t swap =
        axiom(SchemaId::G3, formulas_subst({{"phi", Formula::imp(curried, paired)},
                                            {"psi", Formula::imp(paired, curried)}}));
    const std::size_t swapped = mp(both, swap);
    const std::size_t fst =
        axiom(SchemaId::G2, formulas_subst({{"phi", Formula::imp(paired, curried)},
                                            {"psi", Formula::imp(curried, paired)}}));
    return mp(swapped, fst);
}

std::size_t ProofBuilder::weakening(const Formula& a_in, const Formula& b_in) {
    const Formula a = desugar(a_in), b = desugar(b_in);
    const std::size_t uncurry = g5_backward(a, b, a);
    const std::size_t fst = axiom(SchemaId::G2, formulas_subst({{"phi", a}, {"psi", b}}));
    return mp(fst, uncurry);
}

std::size_t ProofBuilder::pair_intro(const Formula& a_in, const Formula& b_in) {
    const Formula a = desugar(a_in), b = desugar(b_in);
    const Formula ab = Formula::conj(a, b);
    const std::size_t identity = refl(ab);
    const std::size_t uncurry = g5_backward(a, b, ab);
    return mp(identity, uncurry);
}

std::size_t ProofBuilder::internal_mp(const Formula& a_in, const Formula& b_in) {
    const Formula a = desugar(a_in), b = desugar(b_in);
    const Formula ab = Formula::imp(a, b);
    const std::size_t identity = refl(ab);
    const std::size_t curry = g5_forward(ab, a, b);
    const std::size_t applied = mp(identity, curry); // ((a->b) /\ a) -> b
    const std::size_t swap = axiom(SchemaId::G3, formulas_subst({{"phi", a}, {"psi", ab}}));
    return chain(swap, applied);
}

std::size_t ProofBuilder::assertion(const Formula& a_in, const Formula& b_in) {
    const Formula a = desugar(a_in), b = desugar(b_in);
    const std::size_t fire = internal_mp(a, b);
    const std::size_t uncurry = g5_backward(a, Formula::imp(a, b), b);
    return mp(fire, uncurry);
}

std::size_t ProofBuilder::mp_under(std::size_t xa, std::size_t xac) {
    const Formula fa = formula(xa);
    const Formula fac = formula(xac);
    if (!is_imp(fa) || !is_imp(fac) || fa.lhs() != fac.lhs() || !is_imp(fac.rhs()) ||
        fac.rhs().lhs() != fa.rhs())
        throw std::invalid_argument("ProofBuilder: lines do not fit mp_under");
    const Formula x = fa.lhs();
    const Formula a = fa.rhs();
    const Formula c = fac.rhs().rhs();
    const Formula xc = Formula::imp(x, c);
    const std::size_t tr1 =
        axiom(SchemaId::G1, formulas_subst({{"phi", x}, {"psi", a}, {"chi", c}}));
    const std::size_t step1 = mp(xa, tr1); // (a->c) -> (x->c)
    const std::size_t tr2 = axiom(
        SchemaId::G1, formulas_subst({{"phi", x}, {"psi", Formula::imp(a, c)}, {"chi", xc}}));
    const std::size_t step2 = mp(xac, tr2);
    const std::size_t doubled = mp(step1, step2); // x -> (x->c)
    const std::size_t curry = g5_forward(x, x, c);
    const std::size_t paired = mp(doubled, curry); // (x/\x) -> c
    const std::size_t dup = axiom(SchemaId::G4, formulas_subst({{"phi", x}}));
    return chain(dup, paired);
}

Proof ProofBuilder::take() && { return std::move(proof_); }

// ---------------------------------------------------------------------------
// Deduction transform
// ---------------------------------------------------------------------------

Proof deduction_transform(const Proof& p, const Formula& hypothesis) {
    const CheckReport report = check_proof(p);
    if (!report.valid)
        throw std::invalid_argument("deduction_transform: input does not check (" +
                                    report.reason + " at line " +
                                    std::to_string(report.bad_line) + ")");
    const Formula hyp = desugar(hypothesis);
    std::size_t removed = p.extra.size();
    for (std::size_t i = 0; i < p.extra.size(); ++i)
        if (desugar(p.extra[i]) == hyp) {
            removed = i;
            break;
        }
    if (removed == p.extra.size())
        throw std::invalid_argument("deduction_transform: " + hypothesis.str() +
                                    " is not among the proof's hypotheses");

    std::vector<Formula> rest;
    for (std::size_t i = 0; i < p.extra.size(); ++i)
        if (i != removed) rest.push_back(p.extra[i]);

    ProofBuilder b(p.sig, p.theory, std::move(rest));
    std::vector<std::size_t> mapped(p.lines.size());
    for (std::size_t i = 0; i < p.lines.size(); ++i) {
        const ProofLine& line = p.lines[i];
        const Formula& f = line.formula;
        switch (line.how.kind) {
        case Justification::Kind::Extra:
            if (f == hyp) {
                mapped[i] = b.refl(hyp);
                break;
            }
            [[fallthrough]];
        case Justification::Kind::Axiom:
        case Justification::Kind::Hyp: {
            std::size_t base = 0;
            if (line.how.kind == Justification::Kind::Extra) {
                base = b.extra_hyp(line.how.index > removed ? line.how.index - 1
                                                            : line.how.index);
            } else if (line.how.kind == Justification::Kind::Hyp) {
                base = b.hyp(line.how.index);
            } else {
                std::optional<Substitution> subst = line.how.subst;
                if (!subst)
                    for (auto& m : match_axiom(f, *p.sig))
                        if (m.first == line.how.schema) {
                            subst = std::move(m.second);
                            break;
                        }
                if (!subst) throw std::logic_error("checked axiom line failed to rematch");
                base = b.axiom(line.how.schema, std::move(*subst));
            }
            const std::size_t weak = b.weakening(f, hyp); // f -> (hyp -> f)
            mapped[i] = b.mp(base, weak);
            break;
        }
        case Justification::Kind::MP:
            mapped[i] = b.mp_under(mapped[line.how.premise], mapped[line.how.implication]);
            break;
        case Justification::Kind::Gen: {
            const Formula& body = p.lines[line.how.premise].formula;
            const std::size_t all = b.gen(mapped[line.how.premise], line.how.variable);
            Substitution s = formulas_subst({{"psi", hyp}, {"phi", body}});
            s.emplace("x", MetaValue::of_variable(line.how.variable));
            const std::size_t push = b.axiom(SchemaId::GQ_A2, std::move(s));
            mapped[i] = b.mp(all, push);
            break;
        }
        }
    }
    return std::move(b).take();
}

// ---------------------------------------------------------------------------
// Proof files
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
    });
}

std::size_t parse_number(const std::string& word, std::size_t lineno, const char* what) {
    if (!all_digits(word)) throw ParseError(lineno, std::string("expected ") + what);
    try {
        return static_cast<std::size_t>(std::stoull(word));
    } catch (const std::out_of_range&) {
        throw ParseError(lineno, std::string(what) + " out of range");
    }
}

// Splits on commas outside parentheses, for axiom binding lists.
std::vector<std::string> split_top_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

Formula parse_inline_formula(const std::string& text, std::size_t lineno, const Signature& sig) {
    try {
        return parse_formula(text, sig);
    } catch (const ParseError& e) {
        throw ParseError(lineno, "bad formula: " + std::string(e.what()));
    }
}

MetaValue parse_binding_value(MetaValue::Kind kind, const std::string& text, std::size_t lineno,
                              const Signature& sig) {
    switch (kind) {
    case MetaValue::Kind::FormulaV:
        return MetaValue::of_formula(parse_inline_formula(text, lineno, sig));
    case MetaValue::Kind::TermV:
        try {
            return MetaValue::of_term(parse_term(text, sig));
        } catch (const ParseError& e) {
            throw ParseError(lineno, "bad term: " + std::string(e.what()));
        }
    case MetaValue::Kind::VariableV:
        if (!is_identifier(text)) throw ParseError(lineno, "'" + text + "' is not a variable");
        return MetaValue::of_variable(text);
    case MetaValue::Kind::RationalV:
        try {
            return MetaValue::of_rational(Rational::parse(text));
        } catch (const std::invalid_argument& e) {
            throw ParseError(lineno, e.what());
        }
    case MetaValue::Kind::NaturalV:
        return MetaValue::of_natural(parse_number(text, lineno, "a natural number"));
    case MetaValue::Kind::SymbolV:
        if (!is_identifier(text)) throw ParseError(lineno, "'" + text + "' is not a symbol");
        return MetaValue::of_symbol(text);
    }
    throw std::logic_error("parse_binding_value: bad kind");
}

Justification parse_justification(const std::string& text, std::size_t lineno,
                                  const Signature& sig) {
    std::istringstream in(text);
    std::string kw;
    in >> kw;
    if (kw == "axiom") {
        std::string nm;
        in >> nm;
        const auto id = schema_from_name(nm);
        if (!id) throw ParseError(lineno, "unknown schema '" + nm + "'");
        std::string bindings;
        std::getline(in, bindings);
        bindings = trim(bindings);
        if (bindings.empty()) return Justification::axiom(*id);
        const auto& metas = schema_metas(*id);
        Substitution subst;
        for (const std::string& piece : split_top_commas(bindings)) {
            const auto eq = piece.find('=');
            if (eq == std::string::npos)
                throw ParseError(lineno, "expected name=value in axiom bindings");
            const std::string key = trim(piece.substr(0, eq));
            const std::string value = trim(piece.substr(eq + 1));
            const auto meta = std::find_if(metas.begin(), metas.end(),
                                           [&](const auto& m) { return m.first == key; });
            if (meta == metas.end())
                throw ParseError(lineno, nm + " has no metavariable '" + key + "'");
            if (value.empty()) throw ParseError(lineno, "empty value for '" + key + "'");
            if (!subst.emplace(key, parse_binding_value(meta->second, value, lineno, sig))
                     .second)
                throw ParseError(lineno, "duplicate binding for '" + key + "'");
        }
        return Justification::axiom(*id, std::move(subst));
    }

    std::string tail;
    if (kw == "hyp" || kw == "extra") {
        std::string w;
        in >> w;
        const std::size_t k = parse_number(w, lineno, "a hypothesis index");
        if (in >> tail) throw ParseError(lineno, "unexpected text after justification");
        return kw == "hyp" ? Justification::hyp(k) : Justification::extra(k);
    }
    if (kw == "mp") {
        std::string wi, wj;
        in >> wi >> wj;
        const std::size_t i = parse_number(wi, lineno, "a line number");
        const std::size_t j = parse_number(wj, lineno, "a line number");
        if (i == 0 || j == 0) throw ParseError(lineno, "line numbers are 1-based");
        if (in >> tail) throw ParseError(lineno, "unexpected text after justification");
        return Justification::mp(i - 1, j - 1);
    }
    if (kw == "gen") {
        std::string wi, var;
        in >> wi >> var;
        const std::size_t i = parse_number(wi, lineno, "a line number");
        if (i == 0) throw ParseError(lineno, "line numbers are 1-based");
        if (!is_identifier(var)) throw ParseError(lineno, "expected a variable name");
        if (in >> tail) throw ParseError(lineno, "unexpected text after justification");
        return Justification::gen(i - 1, var);
    }
    throw ParseError(lineno, "unknown justification '" + kw + "'");
}

} // namespace

Proof parse_proof(const std::string& text, std::shared_ptr<const Signature> sig,
                  std::vector<Formula> theory) {
    if (!sig) throw std::invalid_argument("parse_proof: null signature");
    Proof p;
    p.sig = sig;
    p.theory = std::move(theory);

    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("extra:", 0) == 0) {
            if (!p.lines.empty())
                throw ParseError(lineno, "extra hypotheses must precede proof lines");
            p.extra.push_back(parse_inline_formula(line.substr(6), lineno, *sig));
            continue;
        }
        const auto dot = line.find('.');
        if (dot == std::string::npos) throw ParseError(lineno, "expected 'N. formula ; rule'");
        const std::size_t number = parse_number(trim(line.substr(0, dot)), lineno, "a line number");
        if (number != p.lines.size() + 1)
            throw ParseError(lineno, "expected line number " +
                                         std::to_string(p.lines.size() + 1));
        const std::string rest = line.substr(dot + 1);
        const auto semi = rest.find(';');
        if (semi == std::string::npos) throw ParseError(lineno, "missing justification");
        const Formula f = parse_inline_formula(trim(rest.substr(0, semi)), lineno, *sig);
        const Justification how = parse_justification(trim(rest.substr(semi + 1)), lineno, *sig);
        p.lines.push_back({desugar(f), how});
    }
    return p;
}

std::string render_proof(const Proof& p) {
    std::string out;
    for (const Formula& f : p.extra) out += "extra: " + f.str() + "\n";
    for (std::size_t i = 0; i < p.lines.size(); ++i) {
        const ProofLine& line = p.lines[i];
        out += std::to_string(i + 1) + ". " + line.formula.str() + " ; ";
        switch (line.how.kind) {
        case Justification::Kind::Axiom: {
            out += "axiom ";
            out += schema_name(line.how.schema);
            if (line.how.subst) {
                std::string sep = " ";
                for (const auto& [key, kind] : schema_metas(line.how.schema)) {
                    (void)kind;
                    const auto it = line.how.subst->find(key);
                    if (it == line.how.subst->end()) continue;
                    out += sep + key + "=" + it->second.str();
                    sep = ", ";
                }
            }
            break;
        }
        case Justification::Kind::Hyp: out += "hyp " + std::to_string(line.how.index); break;
        case Justification::Kind::Extra:
            out += "extra " + std::to_string(line.how.index);
            break;
        case Justification::Kind::MP:
            out += "mp " + std::to_string(line.how.premise + 1) + " " +
                   std::to_string(line.how.implication + 1);
            break;
        case Justification::Kind::Gen:
            out += "gen " + std::to_string(line.how.premise + 1) + " " + line.how.variable;
            break;
        }
        out += "\n";
    }
    return out;
}

} // namespace gumkit
