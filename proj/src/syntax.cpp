#include "gumkit/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace gumkit {

// ---------------------------------------------------------------- Modulus

Modulus Modulus::linear(std::int64_t a, std::int64_t b) {
    if (a < 0 || b < 0 || a + b < 1)
        throw std::invalid_argument("Modulus: linear(" + std::to_string(a) + "," +
                                    std::to_string(b) + ") is not positive");
    Modulus m;
    m.a_ = a;
    m.b_ = b;
    return m;
}

Modulus Modulus::table(std::vector<std::pair<std::int64_t, std::int64_t>> entries,
                       std::int64_t tail_a, std::int64_t tail_b) {
    Modulus m;
    m.a_ = tail_a;
    m.b_ = tail_b;
    m.entries_ = std::move(entries);
    std::int64_t prev_n = 0, prev_v = 0;
    for (const auto& [n, v] : m.entries_) {
        if (n <= prev_n)
            throw std::invalid_argument("Modulus: table arguments must be ascending");
        if (v < 1 || v < prev_v)
            throw std::invalid_argument("Modulus: table values must be nondecreasing and >= 1");
        prev_n = n;
        prev_v = v;
    }
    if (tail_a < 0 || tail_b < 0)
        throw std::invalid_argument("Modulus: negative tail coefficients");
    // The linear tail picks up after the last table entry; it must not dip
    // below the table and must stay positive.
    const std::int64_t first_tail = tail_a * (prev_n + 1) + tail_b;
    if (first_tail < std::max<std::int64_t>(prev_v, 1))
        throw std::invalid_argument("Modulus: tail drops below table values");
    return m;
}

std::int64_t Modulus::operator()(std::int64_t n) const {
    if (n < 1) throw std::domain_error("Modulus: argument must be >= 1");
    if (!entries_.empty() && n <= entries_.back().first) {
        // Largest listed argument at or below n; gaps inherit the previous
        // value, and arguments before the first entry take the first value.
        std::int64_t value = entries_.front().second;
        for (const auto& [k, v] : entries_) {
            if (k > n) break;
            value = v;
        }
        return value;
    }
    return std::max<std::int64_t>(std::int64_t{1}, a_ * n + b_);
}

std::string Modulus::str() const {
    std::ostringstream out;
    if (is_linear()) {
        out << "linear " << a_ << " " << b_;
    } else {
        out << "table ";
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (i) out << ",";
            out << entries_[i].first << ":" << entries_[i].second;
        }
        out << ",default linear " << a_ << " " << b_;
    }
    return out.str();
}

// -------------------------------------------------------------- Signature

const Signature::PredSym* Signature::find_pred(const std::string& name) const {
    for (const auto& p : predicates)
        if (p.name == name) return &p;
    return nullptr;
}

const Signature::FuncSym* Signature::find_func(const std::string& name) const {
    for (const auto& f : functions)
        if (f.name == name) return &f;
    return nullptr;
}

bool Signature::has_constant(const std::string& name) const {
    return std::find(constants.begin(), constants.end(), name) != constants.end();
}

void Signature::validate() const {
    std::set<std::string> seen;
    auto claim = [&seen](const std::string& name) {
        if (!seen.insert(name).second)
            throw std::invalid_argument("Signature: duplicate symbol '" + name + "'");
    };
    for (const auto& p : predicates) claim(p.name);
    for (const auto& f : functions) claim(f.name);
    for (const auto& c : constants) claim(c);
    if (uml_mode) {
        const PredSym* d = find_pred(metric_name);
        if (!d || d->arity != 2)
            throw std::invalid_argument("Signature: uml mode requires binary predicate '" +
                                        metric_name + "'");
        for (const auto& p : predicates)
            if (!p.modulus)
                throw std::invalid_argument("Signature: predicate '" + p.name +
                                            "' lacks a modulus in uml mode");
        for (const auto& f : functions)
            if (!f.modulus)
                throw std::invalid_argument("Signature: function '" + f.name +
                                            "' lacks a modulus in uml mode");
    }
}

// ------------------------------------------------------------------- Term

TermPtr Term::variable(std::string name) {
    auto t = std::make_shared<Term>();
    t->kind_ = Kind::Variable;
    t->name_ = std::move(name);
    return t;
}

TermPtr Term::constant(std::string name) {
    auto t = std::make_shared<Term>();
    t->kind_ = Kind::Constant;
    t->name_ = std::move(name);
    return t;
}

TermPtr Term::apply(std::string func, std::vector<TermPtr> args) {
    auto t = std::make_shared<Term>();
    t->kind_ = Kind::Apply;
    t->name_ = std::move(func);
    t->args_ = std::move(args);
    return t;
}

std::string Term::str() const {
    if (kind_ != Kind::Apply) return name_;
    std::string out = name_ + "(";
    for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) out += ",";
        out += args_[i]->str();
    }
    return out + ")";
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind() != b->kind() || a->name() != b->name()) return false;
    if (a->args().size() != b->args().size()) return false;
    for (std::size_t i = 0; i < a->args().size(); ++i)
        if (!term_equal(a->args()[i], b->args()[i])) return false;
    return true;
}

void term_variables(const TermPtr& t, std::set<std::string>& out) {
    if (t->kind() == Term::Kind::Variable) {
        out.insert(t->name());
        return;
    }
    for (const auto& arg : t->args()) term_variables(arg, out);
}

TermPtr term_substitute(const TermPtr& t, const std::string& var, const TermPtr& replacement) {
    switch (t->kind()) {
    case Term::Kind::Variable:
        return t->name() == var ? replacement : t;
    case Term::Kind::Constant:
        return t;
    case Term::Kind::Apply: {
        std::vector<TermPtr> args;
        args.reserve(t->args().size());
        bool changed = false;
        for (const auto& arg : t->args()) {
            args.push_back(term_substitute(arg, var, replacement));
            changed = changed || args.back().get() != arg.get();
        }
        return changed ? Term::apply(t->name(), std::move(args)) : t;
    }
    }
    return t;
}

static int term_compare(const TermPtr& a, const TermPtr& b) {
    if (a->kind() != b->kind())
        return static_cast<int>(a->kind()) < static_cast<int>(b->kind()) ? -1 : 1;
    if (a->name() != b->name()) return a->name() < b->name() ? -1 : 1;
    if (a->args().size() != b->args().size())
        return a->args().size() < b->args().size() ? -1 : 1;
    for (std::size_t i = 0; i < a->args().size(); ++i)
        if (int c = term_compare(a->args()[i], b->args()[i]); c != 0) return c;
    return 0;
}

// ---------------------------------------------------------------- Formula

namespace {

const FormulaPtr& require_node(const Formula& f) {
    const FormulaPtr& n = f.node();
    if (!n) throw std::logic_error("Formula: empty handle");
    return n;
}

FormulaPtr binary(Formula::Kind kind, const Formula& lhs, const Formula& rhs) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = kind;
    n->left = require_node(lhs);
    n->right = require_node(rhs);
    return n;
}

} // namespace

Formula Formula::rat(Rational r) {
    if (!r.in_unit_interval())
        throw std::invalid_argument("Formula: rational constant " + r.str() +
                                    " outside [0,1]");
    auto n = std::make_shared<FormulaNode>();
    n->kind = Kind::Rat;
    n->rat = r;
    return Formula(std::move(n));
}

Formula Formula::atom(std::string pred, std::vector<TermPtr> args) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = Kind::Atom;
    n->name = std::move(pred);
    n->args = std::move(args);
    return Formula(std::move(n));
}

Formula Formula::conj(Formula lhs, Formula rhs) { return Formula(binary(Kind::And, lhs, rhs)); }
Formula Formula::imp(Formula lhs, Formula rhs) { return Formula(binary(Kind::Imp, lhs, rhs)); }
Formula Formula::disj(Formula lhs, Formula rhs) { return Formula(binary(Kind::Or, lhs, rhs)); }
Formula Formula::iff(Formula lhs, Formula rhs) { return Formula(binary(Kind::Iff, lhs, rhs)); }
Formula Formula::strong_imp(Formula lhs, Formula rhs) {
    return Formula(binary(Kind::StrongImp, lhs, rhs));
}

Formula Formula::forall(std::string var, Formula body) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = Kind::Forall;
    n->name = std::move(var);
    n->left = require_node(body);
    return Formula(std::move(n));
}

Formula Formula::exists(std::string var, Formula body) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = Kind::Exists;
    n->name = std::move(var);
    n->left = require_node(body);
    return Formula(std::move(n));
}

Formula Formula::neg(Formula f) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = Kind::Not;
    n->left = require_node(f);
    return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return require_node(*this)->kind; }

const Rational& Formula::rat_value() const { return require_node(*this)->rat; }
const std::string& Formula::pred_name() const { return require_node(*this)->name; }
const std::vector<TermPtr>& Formula::atom_args() const { return require_node(*this)->args; }

Formula Formula::lhs() const { return Formula(require_node(*this)->left); }
Formula Formula::rhs() const { return Formula(require_node(*this)->right); }
const std::string& Formula::quant_var() const { return require_node(*this)->name; }
Formula Formula::body() const { return Formula(require_node(*this)->left); }

int Formula::compare(const Formula& a, const Formula& b) {
    const FormulaPtr& x = a.node();
    const FormulaPtr& y = b.node();
    if (x.get() == y.get()) return 0;
    if (x->kind != y->kind)
        return static_cast<int>(x->kind) < static_cast<int>(y->kind) ? -1 : 1;
    switch (x->kind) {
    case Kind::Rat: {
        const auto c = x->rat <=> y->rat;
        return c == std::strong_ordering::equal ? 0 : (c == std::strong_ordering::less ? -1 : 1);
    }
    case Kind::Atom: {
        if (x->name != y->name) return x->name < y->name ? -1 : 1;
        if (x->args.size() != y->args.size()) return x->args.size() < y->args.size() ? -1 : 1;
        for (std::size_t i = 0; i < x->args.size(); ++i)
            if (int c = term_compare(x->args[i], y->args[i]); c != 0) return c;
        return 0;
    }
    case Kind::Forall:
    case Kind::Exists:
        if (x->name != y->name) return x->name < y->name ? -1 : 1;
        return compare(Formula(x->left), Formula(y->left));
    case Kind::Not:
        return compare(Formula(x->left), Formula(y->left));
    default:
        if (int c = compare(Formula(x->left), Formula(y->left)); c != 0) return c;
        return compare(Formula(x->right), Formula(y->right));
    }
}

bool operator==(const Formula& a, const Formula& b) { return Formula::compare(a, b) == 0; }

// ----------------------------------------------------------------- render

namespace {

// Precedence levels for rendering with minimal parentheses.
// 0 iff, 1 imp, 2 disj, 3 conj, 4 unary/atom.
int level_of(Formula::Kind k) {
    switch (k) {
    case Formula::Kind::Iff: return 0;
    case Formula::Kind::Imp:
    case Formula::Kind::StrongImp: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    default: return 4;
    }
}

void render_into(const Formula& f, int min_level, std::string& out) {
    const int lvl = level_of(f.kind());
    const bool parens = lvl < min_level;
    if (parens) out += "(";
    switch (f.kind()) {
    case Formula::Kind::Rat:
        out += f.rat_value().str();
        break;
    case Formula::Kind::Atom: {
        out += f.pred_name();
        if (!f.atom_args().empty()) {
            out += "(";
            const auto& args = f.atom_args();
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (i) out += ",";
                out += args[i]->str();
            }
            out += ")";
        }
        break;
    }
    case Formula::Kind::And:
        render_into(f.lhs(), 3, out);
        out += " /\\ ";
        render_into(f.rhs(), 4, out);
        break;
    case Formula::Kind::Or:
        render_into(f.lhs(), 2, out);
        out += " \\/ ";
        render_into(f.rhs(), 3, out);
        break;
    case Formula::Kind::Imp:
        render_into(f.lhs(), 2, out);
        out += " -> ";
        render_into(f.rhs(), 1, out);
        break;
    case Formula::Kind::StrongImp:
        render_into(f.lhs(), 2, out);
        out += " => ";
        render_into(f.rhs(), 1, out);
        break;
    case Formula::Kind::Iff:
        render_into(f.lhs(), 0, out);
        out += " <-> ";
        render_into(f.rhs(), 1, out);
        break;
    case Formula::Kind::Not:
        out += "~";
        render_into(f.body(), 4, out);
        break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
        out += f.kind() == Formula::Kind::Forall ? "forall " : "exists ";
        out += f.quant_var();
        out += ". ";
        render_into(f.body(), 4, out);
        break;
    }
    if (parens) out += ")";
}

} // namespace

std::string Formula::str() const {
    std::string out;
    render_into(*this, 0, out);
    return out;
}

// ---------------------------------------------------------------- desugar

namespace {

// sugar-free subtrees are shared, not rebuilt — evaluation desugars on
// every call, so this keeps core formulas allocation-free
bool has_sugar(const FormulaNode& n) {
    switch (n.kind) {
    case Formula::Kind::Rat:
    case Formula::Kind::Atom: return false;
    case Formula::Kind::And:
    case Formula::Kind::Imp: return has_sugar(*n.left) || has_sugar(*n.right);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: return has_sugar(*n.left);
    default: return true;
    }
}

} // namespace

Formula desugar(const Formula& f) {
    if (!has_sugar(*require_node(f))) return f;
    switch (f.kind()) {
    case Formula::Kind::Rat:
    case Formula::Kind::Atom:
        return f;
    case Formula::Kind::And:
        return Formula::conj(desugar(f.lhs()), desugar(f.rhs()));
    case Formula::Kind::Imp:
        return Formula::imp(desugar(f.lhs()), desugar(f.rhs()));
    case Formula::Kind::Forall:
        return Formula::forall(f.quant_var(), desugar(f.body()));
    case Formula::Kind::Exists:
        return Formula::exists(f.quant_var(), desugar(f.body()));
    case Formula::Kind::Not:
        return Formula::imp(desugar(f.body()), Formula::rat(Rational(1)));
    case Formula::Kind::Or: {
        const Formula a = desugar(f.lhs());
        const Formula b = desugar(f.rhs());
        return Formula::conj(Formula::imp(Formula::imp(a, b), b),
                             Formula::imp(Formula::imp(b, a), a));
    }
    case Formula::Kind::Iff: {
        const Formula a = desugar(f.lhs());
        const Formula b = desugar(f.rhs());
        return Formula::conj(Formula::imp(a, b), Formula::imp(b, a));
    }
    case Formula::Kind::StrongImp: {
        const Formula a = desugar(f.lhs());
        const Formula b = desugar(f.rhs());
        return Formula::imp(Formula::imp(b, a), b);
    }
    }
    throw std::logic_error("desugar: unreachable");
}

// ---------------------------------------------------- variables and capture

namespace {

void free_vars_into(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (f.kind()) {
    case Formula::Kind::Rat:
        return;
    case Formula::Kind::Atom: {
        std::set<std::string> vars;
        for (const auto& t : f.atom_args()) term_variables(t, vars);
        for (const auto& v : vars)
            if (!bound.count(v)) out.insert(v);
        return;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
        const bool fresh = bound.insert(f.quant_var()).second;
        free_vars_into(f.body(), bound, out);
        if (fresh) bound.erase(f.quant_var());
        return;
    }
    case Formula::Kind::Not:
        free_vars_into(f.body(), bound, out);
        return;
    default:
        free_vars_into(f.lhs(), bound, out);
        free_vars_into(f.rhs(), bound, out);
        return;
    }
}

enum class SubstMode { Check, Apply };

// Shared walker for substitutable() / substitute(): in Check mode capture
// reports failure through the return flag, in Apply mode it throws.
Formula subst_walk(const Formula& f, const std::string& var, const TermPtr& t,
                   const std::set<std::string>& term_vars, SubstMode mode, bool& ok) {
    switch (f.kind()) {
    case Formula::Kind::Rat:
        return f;
    case Formula::Kind::Atom: {
        std::vector<TermPtr> args;
        args.reserve(f.atom_args().size());
        bool changed = false;
        for (const auto& arg : f.atom_args()) {
            args.push_back(term_substitute(arg, var, t));
            changed = changed || args.back().get() != arg.get();
        }
        return changed ? Formula::atom(f.pred_name(), std::move(args)) : f;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
        if (f.quant_var() == var) return f; // var is bound here, nothing free below
        if (term_vars.count(f.quant_var()) && free_variables(f).count(var)) {
            if (mode == SubstMode::Apply) throw NotSubstitutable(var, f.quant_var());
            ok = false;
            return f;
        }
        const Formula new_body = subst_walk(f.body(), var, t, term_vars, mode, ok);
        if (!ok) return f;
        return f.kind() == Formula::Kind::Forall ? Formula::forall(f.quant_var(), new_body)
                                                 : Formula::exists(f.quant_var(), new_body);
    }
    case Formula::Kind::Not: {
        const Formula b = subst_walk(f.body(), var, t, term_vars, mode, ok);
        return ok ? Formula::neg(b) : f;
    }
    default: {
        const Formula l = subst_walk(f.lhs(), var, t, term_vars, mode, ok);
        if (!ok) return f;
        const Formula r = subst_walk(f.rhs(), var, t, term_vars, mode, ok);
        if (!ok) return f;
        switch (f.kind()) {
        case Formula::Kind::And: return Formula::conj(l, r);
        case Formula::Kind::Imp: return Formula::imp(l, r);
        case Formula::Kind::Or: return Formula::disj(l, r);
        case Formula::Kind::Iff: return Formula::iff(l, r);
        case Formula::Kind::StrongImp: return Formula::strong_imp(l, r);
        default: throw std::logic_error("subst_walk: unreachable");
        }
    }
    }
}

} // namespace

std::set<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound, out;
    free_vars_into(f, bound, out);
    return out;
}

bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

bool substitutable(const Formula& f, const std::string& var, const TermPtr& t) {
    std::set<std::string> term_vars;
    term_variables(t, term_vars);
    bool ok = true;
    subst_walk(f, var, t, term_vars, SubstMode::Check, ok);
    return ok;
}

Formula substitute(const Formula& f, const std::string& var, const TermPtr& t) {
    std::set<std::string> term_vars;
    term_variables(t, term_vars);
    bool ok = true;
    return subst_walk(f, var, t, term_vars, SubstMode::Apply, ok);
}

std::vector<Formula> subformulas(const Formula& f) {
    const Formula core = desugar(f);
    std::vector<Formula> out;
    auto seen = [&out](const Formula& g) {
        return std::any_of(out.begin(), out.end(), [&g](const Formula& h) { return h == g; });
    };
    auto walk = [&](auto&& self, const Formula& g) -> void {
        if (!seen(g)) out.push_back(g);
        switch (g.kind()) {
        case Formula::Kind::Rat:
        case Formula::Kind::Atom:
            return;
        case Formula::Kind::Forall:
        case Formula::Kind::Exists:
            self(self, g.body());
            return;
        default:
            self(self, g.lhs());
            self(self, g.rhs());
            return;
        }
    };
    walk(walk, core);
    return out;
}

// ----------------------------------------------------------------- parser

namespace {

struct Token {
    enum class Kind { Ident, Number, Symbol, End };
    Kind kind = Kind::End;
    std::string text;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    bool accept_symbol(const std::string& s) {
        if (tok_.kind == Token::Kind::Symbol && tok_.text == s) {
            advance();
            return true;
        }
        return false;
    }

    void expect_symbol(const std::string& s) {
        if (!accept_symbol(s))
            throw ParseError(tok_.pos, "expected '" + s + "', got '" + describe() + "'");
    }

    std::string describe() const {
        return tok_.kind == Token::Kind::End ? "end of input" : tok_.text;
    }

private:
    void advance() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        tok_.pos = i_;
        if (i_ >= text_.size()) {
            tok_ = {Token::Kind::End, "", i_};
            return;
        }
        const char c = text_[i_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
                ++j;
            tok_ = {Token::Kind::Ident, text_.substr(i_, j - i_), i_};
            i_ = j;
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
            // INT or INT/INT
            if (j < text_.size() && text_[j] == '/' && j + 1 < text_.size() &&
                std::isdigit(static_cast<unsigned char>(text_[j + 1]))) {
                ++j;
                while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
            }
            tok_ = {Token::Kind::Number, text_.substr(i_, j - i_), i_};
            i_ = j;
            return;
        }
        static const char* multi[] = {"<->", "->", "=>", "/\\", "\\/"};
        for (const char* m : multi) {
            const std::size_t len = std::char_traits<char>::length(m);
            if (text_.compare(i_, len, m) == 0) {
                tok_ = {Token::Kind::Symbol, m, i_};
                i_ += len;
                return;
            }
        }
        tok_ = {Token::Kind::Symbol, std::string(1, c), i_};
        ++i_;
    }

    const std::string& text_;
    std::size_t i_ = 0;
    Token tok_;
};

class FormulaParser {
public:
    FormulaParser(const std::string& text, const Signature& sig) : lex_(text), sig_(sig) {}

    Formula parse() {
        Formula f = parse_iff();
        if (lex_.peek().kind != Token::Kind::End)
            throw ParseError(lex_.peek().pos, "trailing input '" + lex_.describe() + "'");
        return f;
    }

    TermPtr parse_single_term() {
        TermPtr t = parse_term();
        if (lex_.peek().kind != Token::Kind::End)
            throw ParseError(lex_.peek().pos, "trailing input '" + lex_.describe() + "'");
        return t;
    }

private:
    Formula parse_iff() {
        Formula f = parse_imp();
        while (lex_.accept_symbol("<->")) f = Formula::iff(f, parse_imp());
        return f;
    }

    Formula parse_imp() {
        Formula f = parse_disj();
        if (lex_.accept_symbol("->")) return Formula::imp(f, parse_imp());
        if (lex_.accept_symbol("=>")) return Formula::strong_imp(f, parse_imp());
        return f;
    }

    Formula parse_disj() {
        Formula f = parse_conj();
        while (lex_.accept_symbol("\\/")) f = Formula::disj(f, parse_conj());
        return f;
    }

    Formula parse_conj() {
        Formula f = parse_unary();
        while (lex_.accept_symbol("/\\")) f = Formula::conj(f, parse_unary());
        return f;
    }

    Formula parse_unary() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Symbol && t.text == "~") {
            lex_.take();
            return Formula::neg(parse_unary());
        }
        if (t.kind == Token::Kind::Ident && (t.text == "forall" || t.text == "exists")) {
            const bool universal = t.text == "forall";
            lex_.take();
            const Token v = lex_.take();
            if (v.kind != Token::Kind::Ident)
                throw ParseError(v.pos, "expected variable after quantifier");
            if (sig_.find_pred(v.text) || sig_.find_func(v.text) || sig_.has_constant(v.text))
                throw ParseError(v.pos, "quantified variable '" + v.text +
                                            "' clashes with a declared symbol");
            lex_.expect_symbol(".");
            Formula body = parse_unary();
            return universal ? Formula::forall(v.text, std::move(body))
                             : Formula::exists(v.text, std::move(body));
        }
        return parse_atom();
    }

    Formula parse_atom() {
        const Token t = lex_.take();
        if (t.kind == Token::Kind::Number) {
            const Rational r = Rational::parse(t.text);
            if (!r.in_unit_interval())
                throw ParseError(t.pos, "rational constant " + t.text + " outside [0,1]");
            return Formula::rat(r);
        }
        if (t.kind == Token::Kind::Symbol && t.text == "(") {
            Formula f = parse_iff();
            lex_.expect_symbol(")");
            return f;
        }
        if (t.kind != Token::Kind::Ident)
            throw ParseError(t.pos, "expected formula, got '" + t.text + "'");
        const Signature::PredSym* pred = sig_.find_pred(t.text);
        if (!pred)
            throw ParseError(t.pos, "unknown predicate '" + t.text + "'");
        std::vector<TermPtr> args;
        if (lex_.accept_symbol("(")) {
            if (!lex_.accept_symbol(")")) {
                args.push_back(parse_term());
                while (lex_.accept_symbol(",")) args.push_back(parse_term());
                lex_.expect_symbol(")");
            }
        }
        if (args.size() != pred->arity)
            throw ParseError(t.pos, "predicate '" + t.text + "' expects " +
                                        std::to_string(pred->arity) + " arguments, got " +
                                        std::to_string(args.size()));
        return Formula::atom(t.text, std::move(args));
    }

    TermPtr parse_term() {
        const Token t = lex_.take();
        if (t.kind != Token::Kind::Ident)
            throw ParseError(t.pos, "expected term, got '" + lex_describe(t) + "'");
        if (const Signature::FuncSym* func = sig_.find_func(t.text)) {
            lex_.expect_symbol("(");
            std::vector<TermPtr> args;
            if (!lex_.accept_symbol(")")) {
                args.push_back(parse_term());
                while (lex_.accept_symbol(",")) args.push_back(parse_term());
                lex_.expect_symbol(")");
            }
            if (args.size() != func->arity)
                throw ParseError(t.pos, "function '" + t.text + "' expects " +
                                            std::to_string(func->arity) + " arguments, got " +
                                            std::to_string(args.size()));
            return Term::apply(t.text, std::move(args));
        }
        if (sig_.has_constant(t.text)) return Term::constant(t.text);
        if (sig_.find_pred(t.text))
            throw ParseError(t.pos, "predicate '" + t.text + "' used as a term");
        return Term::variable(t.text);
    }

    static std::string lex_describe(const Token& t) {
        return t.kind == Token::Kind::End ? "end of input" : t.text;
    }

    Lexer lex_;
    const Signature& sig_;
};

} // namespace

Formula parse_formula(const std::string& text, const Signature& sig) {
    return FormulaParser(text, sig).parse();
}

TermPtr parse_term(const std::string& text, const Signature& sig) {
    return FormulaParser(text, sig).parse_single_term();
}

// --------------------------------------------------- signature and theory

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::string strip_comment(const std::string& line) {
    const auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

std::pair<std::string, std::size_t> parse_name_arity(const std::string& word, std::size_t lineno) {
    const auto slash = word.find('/');
    if (slash == std::string::npos)
        throw ParseError(lineno, "expected NAME/ARITY, got '" + word + "'");
    const std::string name = word.substr(0, slash);
    std::size_t arity = 0;
    try {
        arity = std::stoul(word.substr(slash + 1));
    } catch (const std::exception&) {
        throw ParseError(lineno, "bad arity in '" + word + "'");
    }
    return {name, arity};
}

// "modulus linear A B" or "modulus table N:V,...,default linear A B",
// already split into words starting at index i.
Modulus parse_modulus(const std::vector<std::string>& words, std::size_t i, std::size_t lineno) {
    if (i >= words.size())
        throw ParseError(lineno, "missing modulus kind");
    if (words[i] == "linear") {
        if (i + 2 >= words.size())
            throw ParseError(lineno, "modulus linear needs two coefficients");
        return Modulus::linear(std::stoll(words[i + 1]), std::stoll(words[i + 2]));
    }
    if (words[i] != "table")
        throw ParseError(lineno, "unknown modulus kind '" + words[i] + "'");
    // Re-join the remaining words; the table body may contain spaces after commas.
    std::string body;
    for (std::size_t j = i + 1; j < words.size(); ++j) body += words[j] + " ";
    const auto def = body.find("default");
    if (def == std::string::npos)
        throw ParseError(lineno, "modulus table needs a 'default linear A B' tail");
    std::vector<std::pair<std::int64_t, std::int64_t>> entries;
    std::istringstream head(body.substr(0, def));
    std::string cell;
    while (std::getline(head, cell, ',')) {
        std::string trimmed;
        for (char c : cell)
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed.push_back(c);
        if (trimmed.empty()) continue;
        const auto colon = trimmed.find(':');
        if (colon == std::string::npos)
            throw ParseError(lineno, "bad table entry '" + trimmed + "'");
        entries.emplace_back(std::stoll(trimmed.substr(0, colon)),
                             std::stoll(trimmed.substr(colon + 1)));
    }
    const auto tail_words = split_ws(body.substr(def));
    if (tail_words.size() != 4 || tail_words[0] != "default" || tail_words[1] != "linear")
        throw ParseError(lineno, "malformed modulus tail");
    return Modulus::table(std::move(entries), std::stoll(tail_words[2]), std::stoll(tail_words[3]));
}

} // namespace

Signature parse_signature(const std::string& text) {
    Signature sig;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto words = split_ws(strip_comment(raw));
        if (words.empty()) continue;
        if (words[0] == "pred" || words[0] == "func") {
            if (words.size() < 2) throw ParseError(lineno, "missing symbol declaration");
            const auto [name, arity] = parse_name_arity(words[1], lineno);
            std::optional<Modulus> modulus;
            if (words.size() > 2) {
                if (words[2] != "modulus")
                    throw ParseError(lineno, "unexpected '" + words[2] + "'");
                modulus = parse_modulus(words, 3, lineno);
            }
            if (words[0] == "pred")
                sig.predicates.push_back({name, arity, std::move(modulus)});
            else
                sig.functions.push_back({name, arity, std::move(modulus)});
        } else if (words[0] == "const") {
            if (words.size() != 2) throw ParseError(lineno, "const takes exactly one name");
            sig.constants.push_back(words[1]);
        } else {
            throw ParseError(lineno, "unknown declaration '" + words[0] + "'");
        }
    }
    const Signature::PredSym* d = sig.find_pred(sig.metric_name);
    sig.uml_mode = d != nullptr && d->arity == 2;
    sig.validate();
    return sig;
}

std::string render_signature(const Signature& sig) {
    std::ostringstream out;
    for (const auto& p : sig.predicates) {
        out << "pred " << p.name << "/" << p.arity;
        if (p.modulus) out << " modulus " << p.modulus->str();
        out << "\n";
    }
    for (const auto& f : sig.functions) {
        out << "func " << f.name << "/" << f.arity;
        if (f.modulus) out << " modulus " << f.modulus->str();
        out << "\n";
    }
    for (const auto& c : sig.constants) out << "const " << c << "\n";
    return out.str();
}

std::vector<Formula> parse_theory(const std::string& text, const Signature& sig) {
    std::vector<Formula> out;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip_comment(raw);
        if (split_ws(line).empty()) continue;
        Formula f;
        try {
            f = parse_formula(line, sig);
        } catch (const ParseError& e) {
            throw ParseError(lineno, std::string("theory line: ") + e.what());
        }
        if (!is_sentence(f))
            throw ParseError(lineno, "theory member '" + line + "' has free variables");
        out.push_back(std::move(f));
    }
    return out;
}

} // namespace gumkit
