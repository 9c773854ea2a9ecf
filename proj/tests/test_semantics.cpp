#include "doctest.h"

#include <random>

#include "gumkit/semantics.hpp"

using namespace gumkit;

namespace {

std::shared_ptr<const Signature> two_point_sig() {
    return std::make_shared<Signature>(parse_signature("pred P/1\nconst k\n"));
}

// universe {a,b}; P(a)=(1/4,1/4), P(b)=(1/2,1/2); k = b
Structure two_point_model() {
    Structure m(two_point_sig(), {"a", "b"});
    m.set_pred("P", {TruthValue(Rational(1, 4), Rational(1, 4)),
                     TruthValue(Rational(1, 2), Rational(1, 2))});
    m.set_const("k", 1);
    return m;
}

} // namespace

TEST_CASE("structure tables and indexing") {
    const auto sig =
        std::make_shared<Signature>(parse_signature("pred R/2\nfunc f/1\nconst c\n"));
    Structure m(sig, {"a", "b", "e"});
    CHECK(m.element_index("e") == 2);
    CHECK_THROWS_AS(m.element_index("z"), EvalError);

    CHECK(m.tuple_index({1, 2}) == 5);
    CHECK(m.tuple_at(5, 2) == std::vector<std::size_t>{1, 2});
    for (std::size_t i = 0; i < 9; ++i) CHECK(m.tuple_index(m.tuple_at(i, 2)) == i);

    CHECK_THROWS_AS(m.validate(), EvalError); // nothing set yet
    std::vector<TruthValue> r(9, TruthValue::zero());
    r[m.tuple_index({0, 1})] = TruthValue::one();
    m.set_pred("R", r);
    m.set_func("f", {1, 2, 0});
    m.set_const("c", 0);
    m.validate();
    CHECK(m.pred_value("R", {0, 1}) == TruthValue::one());
    CHECK(m.pred_value("R", {1, 0}) == TruthValue::zero());
    CHECK(m.func_value("f", {2}) == 0);

    CHECK_THROWS_AS(m.set_pred("R", {TruthValue::zero()}), std::invalid_argument);
    CHECK_THROWS_AS(m.set_func("f", {0, 3, 0}), std::invalid_argument);
    CHECK_THROWS_AS(m.set_const("missing", 0), std::invalid_argument);
    CHECK_THROWS_AS(Structure(sig, {}), std::invalid_argument);
    CHECK_THROWS_AS(Structure(sig, {"a", "a"}), std::invalid_argument);
}

TEST_CASE("term evaluation") {
    const auto sig = std::make_shared<Signature>(parse_signature("pred P/1\nfunc f/1\nconst c\n"));
    Structure m(sig, {"a", "b"});
    m.set_pred("P", {TruthValue::zero(), TruthValue::zero()});
    m.set_func("f", {1, 1});
    m.set_const("c", 0);

    CHECK(eval_term(m, {}, Term::constant("c")) == 0);
    CHECK(eval_term(m, {{"x", 1}}, Term::variable("x")) == 1);
    CHECK(eval_term(m, {}, Term::apply("f", {Term::constant("c")})) == 1);
    CHECK_THROWS_AS(eval_term(m, {}, Term::variable("x")), EvalError);
}

TEST_CASE("formula evaluation clauses") {
    const Structure m = two_point_model();
    const Signature& sig = m.sig();
    const auto val = [&](const std::string& text) {
        return eval_formula(m, {}, parse_formula(text, sig));
    };

    CHECK(val("3/4") == TruthValue::hat(Rational(3, 4)));
    CHECK(val("forall x. P(x)") == TruthValue(Rational(1, 2), Rational(1, 2))); // sup = max
    CHECK(val("exists x. P(x)") == TruthValue(Rational(1, 4), Rational(1, 4))); // inf = min
    CHECK(val("P(k) /\\ 1/4") == TruthValue(Rational(1, 2), Rational(1, 2)));
    CHECK(val("3/4 -> P(k)") == TruthValue::zero());       // antecedent above consequent
    CHECK(val("1/4 -> P(k)") == val("P(k)"));              // antecedent strictly below
    CHECK(val("~0") == TruthValue::one());                 // 0 -> 1
    CHECK(val("P(k) <-> 1/2") == TruthValue::zero());

    CHECK(satisfies(m, parse_formula("1/2 -> P(k)", sig)));
    CHECK_FALSE(satisfies(m, parse_formula("P(k)", sig)));
    CHECK(satisfies(m, parse_formula("0", sig)));
    CHECK_THROWS_AS(satisfies(m, parse_formula("P(x)", sig)), EvalError); // free variable

    CHECK(models_theory(m, {parse_formula("1/2 -> P(k)", sig), parse_formula("0", sig)}));
    CHECK_FALSE(models_theory(m, {parse_formula("P(k)", sig)}));
}

TEST_CASE("strong implication threshold behavior") {
    // phi => r-bar holds exactly when phi's value lies strictly above hat(r), for r > 0
    const Structure m = two_point_model();
    const Signature& sig = m.sig();
    const std::vector<std::string> bodies = {"P(k)", "exists x. P(x)", "forall x. P(x)",
                                             "0",    "1/4",            "1"};
    const std::vector<Rational> thresholds = {Rational(1, 4), Rational(1, 2), Rational(3, 4),
                                              Rational(1)};
    for (const auto& body : bodies) {
        const Formula phi = parse_formula(body, sig);
        const TruthValue v = eval_formula(m, {}, phi);
        for (const auto& r : thresholds) {
            const Formula test = Formula::strong_imp(phi, Formula::rat(r));
            const bool holds = eval_formula(m, {}, test) == TruthValue::zero();
            CHECK(holds == (v > TruthValue::hat(r)));
        }
    }
}

TEST_CASE("truth degree and its definitional oracle") {
    const auto sig = std::make_shared<Signature>(parse_signature("pred P/1\n"));
    const auto degree_of = [&](const TruthValue& v) {
        Structure m(sig, {"a"});
        m.set_pred("P", {v});
        return truth_degree(m, parse_formula("forall x. P(x)", *sig));
    };
    CHECK(degree_of(TruthValue(Rational(1, 3), Rational(2, 3))) == Rational(1, 3));
    CHECK(degree_of(TruthValue::zero()) == Rational(0));
    CHECK(degree_of(TruthValue::one()) == Rational(1));

    // definitional scan: least grid r with "r-bar -> phi" satisfied brackets
    // the degree from above within one grid step
    const int denom = 24;
    std::mt19937_64 rng(20260822);
    std::uniform_int_distribution<int> pick(0, denom);
    for (int trial = 0; trial < 200; ++trial) {
        int a = pick(rng), b = pick(rng);
        if (a == 0 && b != 0) b = 0;
        const TruthValue v(Rational(a, denom), Rational(b, denom));
        Structure m(sig, {"a"});
        m.set_pred("P", {v});
        const Formula phi = parse_formula("forall x. P(x)", *sig);
        const Rational degree = truth_degree(m, phi);
        Rational scan(1);
        for (int r = 0; r <= denom; ++r) {
            const Formula probe = Formula::imp(Formula::rat(Rational(r, denom)), phi);
            if (satisfies(m, probe)) {
                scan = Rational(r, denom);
                break;
            }
        }
        CHECK(degree <= scan);
        CHECK(scan <= degree + Rational(1, denom));
        CHECK(degree == eval_formula(m, {}, phi).first());
    }
}

TEST_CASE("dual structures and dual evaluation") {
    const Structure m = two_point_model();
    const Signature& sig = m.sig();
    const DualStructure md = to_dual(m);

    CHECK(eval_dual(md, {}, parse_formula("0", sig)) == DualTruthValue::top()); // u(0-hat)
    CHECK(eval_dual(md, {}, parse_formula("P(k)", sig)) ==
          DualTruthValue(Rational(1, 2), Rational(1, 2)));

    // the translation law, on every sentence of the bounded stream
    const std::vector<Rational> pool = {Rational(0), Rational(1, 2), Rational(1)};
    for (const auto& f : enumerate_sentences(sig, 2, pool, 400))
        CHECK(eval_dual(md, {}, f) == tv_u(eval_formula(m, {}, f)));
}

TEST_CASE("named elements") {
    const Structure m = two_point_model();
    const Structure named = with_named_elements(m);
    CHECK(named.sig().has_constant("c_a"));
    CHECK(named.const_value("c_a") == 0);
    CHECK(named.const_value("c_b") == 1);
    CHECK(named.const_value("k") == 1);
    CHECK(satisfies(named, parse_formula("1/4 -> P(c_a)", named.sig())));

    const auto clash = std::make_shared<Signature>(parse_signature("pred P/1\nconst c_a\n"));
    Structure bad(clash, {"a"});
    bad.set_pred("P", {TruthValue::zero()});
    bad.set_const("c_a", 0);
    CHECK_THROWS_AS(with_named_elements(bad), std::invalid_argument);
}

TEST_CASE("sentence enumeration order and determinism") {
    const Signature sig = parse_signature("pred p/0\n");
    const std::vector<Rational> pool = {Rational(0), Rational(1, 2), Rational(1)};

    const auto first = enumerate_sentences(sig, 1, pool, 1000);
    const auto again = enumerate_sentences(sig, 1, pool, 1000);
    REQUIRE(first.size() == again.size());
    for (std::size_t i = 0; i < first.size(); ++i) CHECK(first[i] == again[i]);

    // depth 0 block: pool order, then atoms
    REQUIRE(first.size() >= 4);
    CHECK(first[0] == Formula::rat(Rational(0)));
    CHECK(first[1] == Formula::rat(Rational(1, 2)));
    CHECK(first[2] == Formula::rat(Rational(1)));
    CHECK(first[3] == Formula::atom("p", {}));
    // depth 1 block: /\ pairs, -> pairs, then (vacuous) quantifications
    CHECK(first[4] == Formula::conj(Formula::rat(Rational(0)), Formula::rat(Rational(0))));
    CHECK(first.size() == 4 + 16 + 16 + 4 + 4);
    CHECK(first[36] == Formula::forall("v1", Formula::rat(Rational(0))));

    CHECK(enumerate_sentences(sig, 1, pool, 7).size() == 7);

    // quantified sentences close over v1, nested ones over v2
    const Signature psig = parse_signature("pred P/1\n");
    const auto deep = enumerate_sentences(psig, 2, pool, 100000);
    const Formula all_v1 = Formula::forall("v1", Formula::atom("P", {Term::variable("v1")}));
    CHECK(std::find(deep.begin(), deep.end(), all_v1) != deep.end());
    const Formula nested = Formula::forall(
        "v1", Formula::exists("v2", Formula::atom("P", {Term::variable("v2")})));
    CHECK(std::find(deep.begin(), deep.end(), nested) != deep.end());
    for (const auto& f : deep) CHECK(is_sentence(f));

    // terms apply function symbols at most once
    const Signature fsig = parse_signature("pred P/1\nfunc f/1\nconst c\n");
    const auto with_funcs = enumerate_sentences(fsig, 1, pool, 100000);
    const Formula once = Formula::forall(
        "v1", Formula::atom("P", {Term::apply("f", {Term::variable("v1")})}));
    const Formula twice = Formula::forall(
        "v1",
        Formula::atom("P", {Term::apply("f", {Term::apply("f", {Term::variable("v1")})})}));
    CHECK(std::find(with_funcs.begin(), with_funcs.end(), once) != with_funcs.end());
    CHECK(std::find(with_funcs.begin(), with_funcs.end(), twice) == with_funcs.end());
}

TEST_CASE("bounded theory extraction") {
    const Structure m = two_point_model();
    const std::vector<Rational> pool = {Rational(0), Rational(1, 2), Rational(1)};

    const auto base = theory_of_bounded(m, 0, pool, 1000, false);
    const Formula zero = Formula::rat(Rational(0));
    const Formula half = Formula::rat(Rational(1, 2));
    CHECK(std::find(base.begin(), base.end(), zero) != base.end());
    CHECK(std::find(base.begin(), base.end(), half) == base.end());
    for (const auto& f : base) CHECK(satisfies(m, f));

    // a structure where P is identically true makes "forall x. P(x)" part of the theory
    const auto sig = two_point_sig();
    Structure flat(sig, {"a", "b"});
    flat.set_pred("P", {TruthValue::zero(), TruthValue::zero()});
    flat.set_const("k", 0);
    const auto deep = theory_of_bounded(flat, 1, pool, 100000, false);
    const Formula all_p = Formula::forall("v1", Formula::atom("P", {Term::variable("v1")}));
    CHECK(std::find(deep.begin(), deep.end(), all_p) != deep.end());

    // naming elements exposes per-element atoms
    Structure mixed(sig, {"a", "b"});
    mixed.set_pred("P", {TruthValue::zero(), TruthValue(Rational(1, 2), Rational(1, 2))});
    mixed.set_const("k", 1);
    const auto named = theory_of_bounded(mixed, 0, pool, 100000, true);
    const Formula at_a = Formula::atom("P", {Term::constant("c_a")});
    const Formula at_b = Formula::atom("P", {Term::constant("c_b")});
    CHECK(std::find(named.begin(), named.end(), at_a) != named.end());
    CHECK(std::find(named.begin(), named.end(), at_b) == named.end());
}

TEST_CASE("structure files round-trip") {
    const auto sig =
        std::make_shared<Signature>(parse_signature("pred R/2\nfunc f/1\nconst c\n"));
    Structure m(sig, {"a", "b"});
    std::vector<TruthValue> r;
    for (int i = 0; i < 4; ++i) r.push_back(TruthValue(Rational(i, 4), Rational(i, 4)));
    m.set_pred("R", r);
    m.set_func("f", {1, 0});
    m.set_const("c", 1);

    const std::string text = render_structure(m);
    CHECK(parse_structure(text, sig) == m);
    CHECK(render_structure(parse_structure(text, sig)) == text);

    const Structure commented = parse_structure("# header\n" + text + "\n# trailer\n", sig);
    CHECK(commented == m);

    CHECK_THROWS_AS(parse_structure("pred R: (a,a)=0\n", sig), ParseError); // universe first
    CHECK_THROWS_AS(parse_structure("universe: a a\n", sig), std::invalid_argument);
    CHECK_THROWS_AS(
        parse_structure("universe: a\npred R: (a,a)=0\nfunc f: (a)->a\nconst c: a\nconst c: a\n",
                        sig),
        ParseError); // duplicate table line
    CHECK_THROWS_AS(parse_structure("universe: a b\npred R: (a,a)=0\n", sig), ParseError);
    CHECK_THROWS_AS(
        parse_structure("universe: a\npred R: (a,a)=0\nfunc f: (a)->a\nconst q: a\n", sig),
        ParseError);
    // entries must be complete and row-major
    const std::string swapped = "universe: a b\n"
                                "pred R: (a,a)=0 (b,a)=0 (a,b)=0 (b,b)=0\n"
                                "func f: (a)->b (b)->a\n"
                                "const c: b\n";
    CHECK_THROWS_AS(parse_structure(swapped, sig), ParseError);
}

TEST_CASE("dual structure rendering") {
    const Structure m = two_point_model();
    const std::string text = render_dual_structure(to_dual(m));
    CHECK(text.find("universe: a b") != std::string::npos);
    CHECK(text.find("(a)=(3/4,3/4)") != std::string::npos); // u((1/4,1/4))
    CHECK(text.find("const k: b") != std::string::npos);
}
