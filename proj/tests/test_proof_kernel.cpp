#include "doctest.h"

#include <algorithm>

#include "gumkit/proof_kernel.hpp"
#include "gumkit/semantics.hpp"

using namespace gumkit;

namespace {

std::shared_ptr<const Signature> prop_sig() {
    return std::make_shared<Signature>(parse_signature("pred p/0\n"
                                                       "pred q/0\n"
                                                       "pred r/0\n"
                                                       "pred P/1\n"
                                                       "pred Q/1\n"
                                                       "pred R/2\n"
                                                       "func f/1\n"
                                                       "const c\n"));
}

std::shared_ptr<const Signature> metric_sig() {
    return std::make_shared<Signature>(
        parse_signature("pred d/2 modulus linear 1 0\n"
                        "pred P/1 modulus linear 2 1\n"
                        "pred q/0 modulus linear 1 0\n"
                        "func f/1 modulus table 1:2,3:5,default linear 2 0\n"
                        "func g/2 modulus linear 3 1\n"
                        "const c\n"));
}

Formula fml(const std::string& text, const std::shared_ptr<const Signature>& sig) {
    return desugar(parse_formula(text, *sig));
}

Substitution formulas(std::initializer_list<std::pair<const char*, Formula>> kv) {
    Substitution s;
    for (const auto& [k, f] : kv) s.emplace(k, MetaValue::of_formula(f));
    return s;
}

bool matches_schema(const std::vector<std::pair<SchemaId, Substitution>>& ms, SchemaId id) {
    return std::any_of(ms.begin(), ms.end(), [&](const auto& m) { return m.first == id; });
}

} // namespace

TEST_CASE("schema names round-trip") {
    for (SchemaId id : all_schemas) {
        const auto back = schema_from_name(schema_name(id));
        REQUIRE(back.has_value());
        CHECK(*back == id);
    }
    CHECK_FALSE(schema_from_name("G9").has_value());
    CHECK(schema_requires_uml(SchemaId::S1));
    CHECK(schema_requires_uml(SchemaId::WE2));
    CHECK_FALSE(schema_requires_uml(SchemaId::G1));
    CHECK_FALSE(schema_requires_uml(SchemaId::RGL3));
    CHECK(schema_metas(SchemaId::G1).size() == 3);
    CHECK(schema_metas(SchemaId::GQ_A1)[2].first == "t");
    CHECK(schema_metas(SchemaId::WE1)[0].second == MetaValue::Kind::SymbolV);
}

TEST_CASE("propositional schema instances") {
    const auto sig = prop_sig();
    const Formula p = fml("p", sig), q = fml("q", sig), r = fml("r", sig);

    CHECK(schema_instance(SchemaId::G0, formulas({{"phi", p}}), *sig) == fml("p -> 0", sig));
    CHECK(schema_instance(SchemaId::G1, formulas({{"phi", p}, {"psi", q}, {"chi", r}}), *sig) ==
          fml("(p -> q) -> ((q -> r) -> (p -> r))", sig));
    CHECK(schema_instance(SchemaId::G2, formulas({{"phi", p}, {"psi", q}}), *sig) ==
          fml("(p /\\ q) -> p", sig));
    CHECK(schema_instance(SchemaId::G3, formulas({{"phi", p}, {"psi", q}}), *sig) ==
          fml("(p /\\ q) -> (q /\\ p)", sig));
    CHECK(schema_instance(SchemaId::G4, formulas({{"phi", p}}), *sig) ==
          fml("p -> (p /\\ p)", sig));
    CHECK(schema_instance(SchemaId::G5, formulas({{"phi", p}, {"psi", q}, {"chi", r}}), *sig) ==
          fml("(p -> (q -> r)) <-> ((p /\\ q) -> r)", sig));
    CHECK(schema_instance(SchemaId::G6, formulas({{"phi", p}, {"psi", q}, {"chi", r}}), *sig) ==
          fml("((p -> q) -> r) -> (((q -> p) -> r) -> r)", sig));
    CHECK(schema_instance(SchemaId::G7, formulas({{"phi", p}}), *sig) == fml("1 -> p", sig));

    // Instances may be open formulas.
    CHECK(schema_instance(SchemaId::G4, formulas({{"phi", fml("P(x)", sig)}}), *sig) ==
          fml("P(x) -> (P(x) /\\ P(x))", sig));

    CHECK_THROWS_AS(schema_instance(SchemaId::G1, formulas({{"phi", p}}), *sig),
                    std::invalid_argument); // missing psi, chi
    CHECK_THROWS_AS(schema_instance(SchemaId::G0, formulas({{"phi", p}, {"psi", q}}), *sig),
                    std::invalid_argument); // G0 has no psi
    Substitution wrong;
    wrong.emplace("phi", MetaValue::of_rational(Rational(1, 2)));
    CHECK_THROWS_AS(schema_instance(SchemaId::G0, wrong, *sig), std::invalid_argument);
}

TEST_CASE("quantifier schema instances and side conditions") {
    const auto sig = prop_sig();
    const Formula px = fml("P(x)", sig);

    Substitution a1 = formulas({{"phi", px}});
    a1.emplace("x", MetaValue::of_variable("x"));
    a1.emplace("t", MetaValue::of_term(parse_term("f(c)", *sig)));
    CHECK(schema_instance(SchemaId::GQ_A1, a1, *sig) ==
          fml("(forall x. P(x)) -> P(f(c))", sig));

    Substitution e1 = formulas({{"phi", px}});
    e1.emplace("x", MetaValue::of_variable("x"));
    e1.emplace("t", MetaValue::of_term(parse_term("c", *sig)));
    CHECK(schema_instance(SchemaId::GQ_E1, e1, *sig) == fml("P(c) -> (exists x. P(x))", sig));

    // Substituting y for x under an exists y binder would capture it.
    Substitution capture = formulas({{"phi", fml("exists y. R(x,y)", sig)}});
    capture.emplace("x", MetaValue::of_variable("x"));
    capture.emplace("t", MetaValue::of_term(parse_term("y", *sig)));
    CHECK_THROWS_AS(schema_instance(SchemaId::GQ_A1, capture, *sig), std::invalid_argument);

    Substitution a2 = formulas({{"phi", px}, {"psi", fml("q", sig)}});
    a2.emplace("x", MetaValue::of_variable("x"));
    CHECK(schema_instance(SchemaId::GQ_A2, a2, *sig) ==
          fml("(forall x. (q -> P(x))) -> (q -> (forall x. P(x)))", sig));
    CHECK(schema_instance(SchemaId::GQ_A3, a2, *sig) ==
          fml("(forall x. (q \\/ P(x))) -> (q \\/ (forall x. P(x)))", sig));
    CHECK(schema_instance(SchemaId::GQ_E2, a2, *sig) ==
          fml("(exists x. (q -> P(x))) -> (q -> (exists x. P(x)))", sig));

    // x free in the fixed side violates the freeness condition.
    Substitution bad = formulas({{"phi", fml("Q(x)", sig)}, {"psi", px}});
    bad.emplace("x", MetaValue::of_variable("x"));
    CHECK_THROWS_AS(schema_instance(SchemaId::GQ_A2, bad, *sig), std::invalid_argument);
    CHECK_THROWS_AS(schema_instance(SchemaId::GQ_E2, bad, *sig), std::invalid_argument);
}

TEST_CASE("rational constant schema instances") {
    const auto sig = prop_sig();
    auto rats = [](const Rational& r, const Rational& s) {
        Substitution sub;
        sub.emplace("r", MetaValue::of_rational(r));
        sub.emplace("s", MetaValue::of_rational(s));
        return sub;
    };
    CHECK(schema_instance(SchemaId::RGL1, rats(Rational(3, 4), Rational(1, 2)), *sig) ==
          fml("(3/4 /\\ 1/2) <-> 3/4", sig));
    CHECK(schema_instance(SchemaId::RGL1, rats(Rational(1, 4), Rational(1, 2)), *sig) ==
          fml("(1/4 /\\ 1/2) <-> 1/2", sig));
    CHECK(schema_instance(SchemaId::RGL2_GE, rats(Rational(3, 4), Rational(1, 2)), *sig) ==
          fml("3/4 -> 1/2", sig));
    CHECK_THROWS_AS(schema_instance(SchemaId::RGL2_GE, rats(Rational(1, 4), Rational(1, 2)), *sig),
                    std::invalid_argument);
    CHECK(schema_instance(SchemaId::RGL2_LT, rats(Rational(1, 4), Rational(1, 2)), *sig) ==
          fml("(1/4 -> 1/2) <-> 1/2", sig));
    CHECK_THROWS_AS(schema_instance(SchemaId::RGL2_LT, rats(Rational(1, 2), Rational(1, 2)), *sig),
                    std::invalid_argument);

    Substitution r34;
    r34.emplace("r", MetaValue::of_rational(Rational(3, 4)));
    CHECK(schema_instance(SchemaId::RGL3, r34, *sig) == fml("(3/4 -> 1) -> 1", sig));
    Substitution r1;
    r1.emplace("r", MetaValue::of_rational(Rational(1)));
    CHECK_THROWS_AS(schema_instance(SchemaId::RGL3, r1, *sig), std::invalid_argument);
    Substitution big;
    big.emplace("r", MetaValue::of_rational(Rational(3, 2)));
    CHECK_THROWS_AS(schema_instance(SchemaId::RGL3, big, *sig), std::invalid_argument);
}

TEST_CASE("metric schema instances") {
    const auto msig = metric_sig();
    const auto psig = prop_sig();

    Substitution x1;
    x1.emplace("x", MetaValue::of_variable("x"));
    CHECK(schema_instance(SchemaId::S1, x1, *msig) == fml("forall x. d(x,x)", msig));
    CHECK_THROWS_AS(schema_instance(SchemaId::S1, x1, *psig), std::invalid_argument);

    Substitution xy = x1;
    xy.emplace("y", MetaValue::of_variable("y"));
    CHECK(schema_instance(SchemaId::S2, xy, *msig) ==
          fml("forall x. forall y. (d(x,y) -> d(y,x))", msig));
    Substitution xx = x1;
    xx.emplace("y", MetaValue::of_variable("x"));
    CHECK_THROWS_AS(schema_instance(SchemaId::S2, xx, *msig), std::invalid_argument);

    Substitution xyz = xy;
    xyz.emplace("z", MetaValue::of_variable("z"));
    CHECK(schema_instance(SchemaId::S3, xyz, *msig) ==
          fml("forall x. forall y. forall z. ((d(x,y) /\\ d(y,z)) -> d(x,z))", msig));

    auto we = [](const char* key, const char* sym, unsigned long n) {
        Substitution s;
        s.emplace(key, MetaValue::of_symbol(sym));
        s.emplace("n", MetaValue::of_natural(n));
        return s;
    };
    // f's modulus maps 3 to 5.
    CHECK(schema_instance(SchemaId::WE1, we("f", "f", 3), *msig) ==
          fml("forall x1. forall y1. ((d(x1,y1) -> 1/5) \\/ (1/3 -> d(f(x1),f(y1))))", msig));
    // g's modulus maps 2 to 3*2+1 = 7; binary symbols pair up both argument
    // positions in the closeness chain.
    CHECK(schema_instance(SchemaId::WE1, we("f", "g", 2), *msig) ==
          fml("forall x1. forall x2. forall y1. forall y2. "
              "(((d(x1,y1) /\\ d(x2,y2)) -> 1/7) \\/ (1/2 -> d(g(x1,x2),g(y1,y2))))",
              msig));
    // P's modulus maps 3 to 7.
    CHECK(schema_instance(SchemaId::WE2, we("P", "P", 3), *msig) ==
          fml("forall x1. forall y1. ((d(x1,y1) -> 1/7) \\/ (1/3 -> (P(x1) <-> P(y1))))",
              msig));
    // The metric predicate itself is congruent too.
    CHECK(schema_instance(SchemaId::WE2, we("P", "d", 1), *msig) ==
          fml("forall x1. forall x2. forall y1. forall y2. "
              "(((d(x1,y1) /\\ d(x2,y2)) -> 1) \\/ (1 -> (d(x1,x2) <-> d(y1,y2))))",
              msig));

    CHECK_THROWS_AS(schema_instance(SchemaId::WE1, we("f", "f", 0), *msig),
                    std::invalid_argument); // n must be positive
    CHECK_THROWS_AS(schema_instance(SchemaId::WE2, we("P", "q", 2), *msig),
                    std::invalid_argument); // nullary symbol
    CHECK_THROWS_AS(schema_instance(SchemaId::WE1, we("f", "f", 3), *psig),
                    std::invalid_argument);
    CHECK_THROWS_AS(schema_instance(SchemaId::WE2, we("P", "nope", 2), *msig),
                    std::invalid_argument);
}

TEST_CASE("axiom recognition by shape") {
    const auto sig = prop_sig();

    const auto g1 = match_axiom(fml("(p -> q) -> ((q -> r) -> (p -> r))", sig), *sig);
    REQUIRE(matches_schema(g1, SchemaId::G1));
    for (const auto& [id, sub] : g1)
        if (id == SchemaId::G1) {
            CHECK(sub.at("phi").formula() == fml("p", sig));
            CHECK(sub.at("psi").formula() == fml("q", sig));
            CHECK(sub.at("chi").formula() == fml("r", sig));
        }

    const auto ge = match_axiom(fml("3/4 -> 1/2", sig), *sig);
    REQUIRE(ge.size() == 1);
    CHECK(ge[0].first == SchemaId::RGL2_GE);
    CHECK(ge[0].second.at("r").rational() == Rational(3, 4));

    // A constant implication into 0 is both the bottom axiom and a
    // constant-order axiom; both readings are reported, in schema order.
    const auto both = match_axiom(fml("1/2 -> 0", sig), *sig);
    REQUIRE(both.size() == 2);
    CHECK(both[0].first == SchemaId::G0);
    CHECK(both[1].first == SchemaId::RGL2_GE);

    const auto top = match_axiom(fml("1 -> 1/2", sig), *sig);
    REQUIRE(top.size() == 2);
    CHECK(top[0].first == SchemaId::G7);
    CHECK(top[1].first == SchemaId::RGL2_GE);

    const auto dup = match_axiom(fml("(p /\\ p) -> p", sig), *sig);
    CHECK(matches_schema(dup, SchemaId::G2));
    CHECK_FALSE(matches_schema(dup, SchemaId::G3)); // G3 would conclude p /\ p
    CHECK(matches_schema(match_axiom(fml("(p /\\ p) -> (p /\\ p)", sig), *sig), SchemaId::G3));

    CHECK(matches_schema(match_axiom(fml("p -> (p /\\ p)", sig), *sig), SchemaId::G4));
    CHECK(matches_schema(
        match_axiom(fml("(p -> (q -> r)) <-> ((p /\\ q) -> r)", sig), *sig), SchemaId::G5));
    CHECK(matches_schema(match_axiom(fml("(1/4 /\\ 1/2) <-> 1/2", sig), *sig), SchemaId::RGL1));
    CHECK(matches_schema(match_axiom(fml("(1/4 -> 1/2) <-> 1/2", sig), *sig),
                         SchemaId::RGL2_LT));
    CHECK(matches_schema(match_axiom(fml("(3/4 -> 1) -> 1", sig), *sig), SchemaId::RGL3));
    CHECK(match_axiom(fml("p -> q", sig), *sig).empty());
}

TEST_CASE("quantifier axiom recognition extracts the witness term") {
    const auto sig = prop_sig();

    const auto a1 = match_axiom(fml("(forall x. P(x)) -> P(f(c))", sig), *sig);
    REQUIRE(a1.size() == 1);
    CHECK(a1[0].first == SchemaId::GQ_A1);
    CHECK(a1[0].second.at("t").term()->str() == "f(c)");
    CHECK(a1[0].second.at("x").name() == "x");

    // No single term works for both occurrences.
    CHECK(match_axiom(fml("(forall x. R(x,x)) -> R(c,f(c))", sig), *sig).empty());

    // The replacement y would be captured by the inner binder.
    CHECK(match_axiom(fml("(forall x. exists y. R(x,y)) -> (exists y. R(y,y))", sig), *sig)
              .empty());

    // A vacuous instantiation reads back as the variable itself.
    const auto vac = match_axiom(fml("(forall x. q) -> q", sig), *sig);
    REQUIRE(vac.size() == 1);
    CHECK(vac[0].first == SchemaId::GQ_A1);
    CHECK(vac[0].second.at("t").term()->str() == "x");

    const auto e1 = match_axiom(fml("P(c) -> (exists x. P(x))", sig), *sig);
    REQUIRE(e1.size() == 1);
    CHECK(e1[0].first == SchemaId::GQ_E1);
    CHECK(e1[0].second.at("t").term()->str() == "c");

    CHECK(matches_schema(
        match_axiom(fml("(forall x. (q -> P(x))) -> (q -> (forall x. P(x)))", sig), *sig),
        SchemaId::GQ_A2));
    CHECK(matches_schema(
        match_axiom(fml("(exists x. (q -> P(x))) -> (q -> (exists x. P(x)))", sig), *sig),
        SchemaId::GQ_E2));
    CHECK(matches_schema(
        match_axiom(fml("(forall x. (q \\/ P(x))) -> (q \\/ (forall x. P(x)))", sig), *sig),
        SchemaId::GQ_A3));

    // Moving the quantifier across a side with x free is not an instance.
    CHECK(match_axiom(fml("(forall x. (P(x) -> Q(x))) -> (P(x) -> (forall x. Q(x)))", sig),
                      *sig)
              .empty());
}

TEST_CASE("metric axiom recognition") {
    const auto msig = metric_sig();
    const auto s2 = match_axiom(fml("forall u. forall v. (d(u,v) -> d(v,u))", msig), *msig);
    REQUIRE(s2.size() == 1);
    CHECK(s2[0].first == SchemaId::S2);
    CHECK(s2[0].second.at("x").name() == "u");

    CHECK(matches_schema(match_axiom(fml("forall x. d(x,x)", msig), *msig), SchemaId::S1));
    CHECK(matches_schema(
        match_axiom(fml("forall x. forall y. forall z. ((d(x,y) /\\ d(y,z)) -> d(x,z))", msig),
                    *msig),
        SchemaId::S3));

    Substitution we1;
    we1.emplace("f", MetaValue::of_symbol("g"));
    we1.emplace("n", MetaValue::of_natural(4));
    const Formula w1 = schema_instance(SchemaId::WE1, we1, *msig);
    const auto m1 = match_axiom(w1, *msig);
    REQUIRE(m1.size() == 1);
    CHECK(m1[0].first == SchemaId::WE1);
    CHECK(m1[0].second.at("f").name() == "g");
    CHECK(m1[0].second.at("n").natural() == 4);

    Substitution we2;
    we2.emplace("P", MetaValue::of_symbol("d"));
    we2.emplace("n", MetaValue::of_natural(2));
    const Formula w2 = schema_instance(SchemaId::WE2, we2, *msig);
    const auto m2 = match_axiom(w2, *msig);
    REQUIRE(m2.size() == 1);
    CHECK(m2[0].first == SchemaId::WE2);
    CHECK(m2[0].second.at("P").name() == "d");
    CHECK(m2[0].second.at("n").natural() == 2);
}

TEST_CASE("proof checking accepts and rejects line by line") {
    const auto sig = prop_sig();
    const Formula p = fml("p", sig);

    Proof ok;
    ok.sig = sig;
    ok.theory = {p};
    ok.lines.push_back({p, Justification::hyp(0)});
    ok.lines.push_back(
        {fml("p -> 0", sig), Justification::axiom(SchemaId::G0, formulas({{"phi", p}}))});
    ok.lines.push_back({fml("0", sig), Justification::mp(0, 1)});
    CHECK(check_proof(ok).valid);
    CHECK(ok.conclusion() == fml("0", sig));

    // The same axiom line also checks without explicit bindings.
    Proof nosub = ok;
    nosub.lines[1].how = Justification::axiom(SchemaId::G0);
    CHECK(check_proof(nosub).valid);

    // ... but not under a wrong schema id.
    Proof wrongid = ok;
    wrongid.lines[1].how = Justification::axiom(SchemaId::G7);
    CheckReport rep = check_proof(wrongid);
    CHECK_FALSE(rep.valid);
    CHECK(rep.bad_line == 2);
    CHECK(rep.reason == "AxiomMismatch");

    Proof tampered = ok;
    tampered.lines[1].formula = fml("p -> 1", sig);
    rep = check_proof(tampered);
    CHECK_FALSE(rep.valid);
    CHECK(rep.bad_line == 2);
    CHECK(rep.reason == "AxiomMismatch");

    Proof badhyp = ok;
    badhyp.lines[0].how = Justification::hyp(3);
    rep = check_proof(badhyp);
    CHECK(rep.reason == "BadHypIndex");
    badhyp.lines[0].how = Justification::hyp(0);
    badhyp.lines[0].formula = fml("q", sig);
    rep = check_proof(badhyp);
    CHECK(rep.bad_line == 1);
    CHECK(rep.reason == "HypMismatch");

    Proof swapped = ok;
    swapped.lines[2].how = Justification::mp(1, 0);
    rep = check_proof(swapped);
    CHECK(rep.bad_line == 3);
    CHECK(rep.reason == "MPShapeMismatch");

    Proof forward = ok;
    forward.lines[2].how = Justification::mp(0, 2);
    rep = check_proof(forward);
    CHECK(rep.reason == "BadLineIndex");

    Proof open_theory = ok;
    open_theory.theory = {fml("P(x)", sig)};
    rep = check_proof(open_theory);
    CHECK_FALSE(rep.valid);
    CHECK(rep.bad_line == 0);
    CHECK(rep.reason == "TheoryNotSentence");

    Proof open_extra = ok;
    open_extra.extra = {fml("P(x)", sig)};
    rep = check_proof(open_extra);
    CHECK(rep.bad_line == 0);
    CHECK(rep.reason == "ExtraNotSentence");

    Proof metric_here;
    metric_here.sig = sig;
    metric_here.lines.push_back(
        {fml("forall x. P(x)", sig), Justification::axiom(SchemaId::S1)});
    rep = check_proof(metric_here);
    CHECK(rep.bad_line == 1);
    CHECK(rep.reason == "SchemaRequiresUml");

    Proof extra_proof;
    extra_proof.sig = sig;
    extra_proof.extra = {p};
    extra_proof.lines.push_back({p, Justification::extra(2)});
    rep = check_proof(extra_proof);
    CHECK(rep.reason == "BadExtraIndex");
    extra_proof.lines[0].how = Justification::extra(0);
    extra_proof.lines[0].formula = fml("q", sig);
    rep = check_proof(extra_proof);
    CHECK(rep.reason == "ExtraMismatch");
}

TEST_CASE("generalization checking") {
    const auto sig = prop_sig();
    Proof pr;
    pr.sig = sig;
    pr.lines.push_back({fml("P(x) -> P(x)", sig), Justification::axiom(SchemaId::G1)});
    CHECK_FALSE(check_proof(pr).valid); // not a G1 instance; just the scaffold

    ProofBuilder b(sig);
    const std::size_t base = b.refl(fml("P(x)", sig));
    b.gen(base, "x");
    Proof built = std::move(b).take();
    CHECK(check_proof(built).valid);
    CHECK(built.conclusion() == fml("forall x. (P(x) -> P(x))", sig));

    Proof renamed = built;
    renamed.lines.back().how.variable = "y";
    const CheckReport rep = check_proof(renamed);
    CHECK(rep.bad_line == built.lines.size());
    CHECK(rep.reason == "GenShapeMismatch");
}

TEST_CASE("builder derived steps conclude the advertised shapes") {
    const auto sig = prop_sig();
    const Formula p = fml("p", sig), q = fml("q", sig), r = fml("r", sig);

    ProofBuilder b(sig);
    CHECK(b.formula(b.refl(p)) == fml("p -> p", sig));
    CHECK(b.formula(b.weakening(p, q)) == fml("p -> (q -> p)", sig));
    CHECK(b.formula(b.pair_intro(p, q)) == fml("p -> (q -> (p /\\ q))", sig));
    CHECK(b.formula(b.g5_forward(p, q, r)) ==
          fml("(p -> (q -> r)) -> ((p /\\ q) -> r)", sig));
    CHECK(b.formula(b.g5_backward(p, q, r)) ==
          fml("((p /\\ q) -> r) -> (p -> (q -> r))", sig));
    CHECK(b.formula(b.internal_mp(p, q)) == fml("(p /\\ (p -> q)) -> q", sig));
    CHECK(b.formula(b.assertion(p, q)) == fml("p -> ((p -> q) -> q)", sig));
    const Proof done = std::move(b).take();
    CHECK(check_proof(done).valid);

    ProofBuilder chains(sig, {}, {fml("p -> q", sig), fml("q -> r", sig)});
    const std::size_t pq = chains.extra_hyp(0);
    const std::size_t qr = chains.extra_hyp(1);
    CHECK(chains.formula(chains.chain(pq, qr)) == fml("p -> r", sig));
    CHECK_THROWS_AS(chains.chain(qr, pq), std::invalid_argument);
    Proof chained = std::move(chains).take();
    CHECK(check_proof(chained).valid);

    ProofBuilder under(sig, {}, {fml("p -> q", sig), fml("p -> (q -> r)", sig)});
    const std::size_t xa = under.extra_hyp(0);
    const std::size_t xac = under.extra_hyp(1);
    CHECK(under.formula(under.mp_under(xa, xac)) == fml("p -> r", sig));
    CHECK_THROWS_AS(under.mp_under(xac, xa), std::invalid_argument);
    Proof undered = std::move(under).take();
    CHECK(check_proof(undered).valid);

    ProofBuilder bad(sig);
    const std::size_t one = bad.refl(p);
    const std::size_t two = bad.refl(q);
    CHECK_THROWS_AS(bad.mp(one, two), std::invalid_argument);
    CHECK_THROWS_AS(bad.hyp(0), std::invalid_argument);
    CHECK_THROWS_AS(bad.gen(one, "not a name"), std::invalid_argument);
    CHECK_THROWS_AS(ProofBuilder(sig, {fml("P(x)", sig)}), std::invalid_argument);
}

TEST_CASE("lemma proofs check and conclude their statements") {
    const auto sig = prop_sig();
    const Formula p = fml("p", sig), q = fml("q", sig), r = fml("r", sig);

    struct Expect {
        const char* name;
        std::vector<Formula> args;
        Formula conclusion;
        std::size_t extras;
    };
    const std::vector<Expect> table = {
        {"refl", {p}, fml("p -> p", sig), 0},
        {"i", {p, q}, fml("p -> (q -> p)", sig), 0},
        {"ii", {p, q}, fml("p -> (q -> (p /\\ q))", sig), 0},
        {"iii", {p}, fml("(0 -> p) -> p", sig), 0},
        {"iv", {p, q}, fml("p /\\ q", sig), 2},
        {"v", {p, q, r}, fml("p -> r", sig), 2},
        {"vi", {p, q}, fml("((p -> q) -> (q -> p)) -> (q -> p)", sig), 0},
        {"vii", {p, q}, fml("p -> (p \\/ q)", sig), 0},
        {"viii", {p, q, r}, fml("(q -> p) \\/ r", sig), 1},
    };
    for (const Expect& e : table) {
        CAPTURE(e.name);
        const Proof pr = lemma_proof(e.name, e.args, sig);
        CHECK(check_proof(pr).valid);
        CHECK(pr.conclusion() == e.conclusion);
        CHECK(pr.extra.size() == e.extras);
    }

    // The premises of the rule-shaped lemmas are carried as hypotheses.
    const Proof viii = lemma_proof("viii", {p, q, r}, sig);
    REQUIRE(viii.extra.size() == 1);
    CHECK(desugar(viii.extra[0]) == fml("(p -> q) -> r", sig));

    // Theorem-shaped lemmas work on open formulas too.
    const Proof open = lemma_proof("vii", {fml("P(x)", sig), fml("Q(x)", sig)}, sig);
    CHECK(check_proof(open).valid);
    CHECK(open.conclusion() == fml("P(x) -> (P(x) \\/ Q(x))", sig));

    CHECK_THROWS_AS(lemma_proof("nope", {p}, sig), std::invalid_argument);
    CHECK_THROWS_AS(lemma_proof("refl", {p, q}, sig), std::invalid_argument);
    CHECK_THROWS_AS(lemma_proof("iv", {fml("P(x)", sig), q}, sig),
                    std::invalid_argument); // rule premises must be sentences
}

TEST_CASE("lemma conclusions hold in a concrete structure") {
    const auto sig = prop_sig();
    Structure m(sig, {"a", "b"});
    m.set_pred("p", {TruthValue(Rational(1, 3), Rational(1, 3))});
    m.set_pred("q", {TruthValue(Rational(2, 3), Rational(2, 3))});
    m.set_pred("r", {TruthValue::one()});
    m.set_pred("P", {TruthValue::zero(), TruthValue(Rational(1, 2), Rational(3, 4))});
    m.set_pred("Q", {TruthValue(Rational(1, 4), Rational(1, 4)), TruthValue::zero()});
    std::vector<TruthValue> rel(4, TruthValue::zero());
    rel[1] = TruthValue(Rational(1, 2), Rational(1, 2));
    m.set_pred("R", rel);
    m.set_func("f", {1, 0});
    m.set_const("c", 0);

    const Formula p = fml("p", sig), q = fml("q", sig);
    for (const char* name : {"refl", "i", "ii", "vi", "vii"}) {
        CAPTURE(name);
        const Proof pr = lemma_proof(
            name, std::string(name) == "refl" ? std::vector<Formula>{p}
                                              : std::vector<Formula>{p, q},
            sig);
        CHECK(satisfies(m, pr.conclusion()));
    }
    CHECK(satisfies(m, lemma_proof("iii", {q}, sig).conclusion()));

    // Every line of a hypothesis-free proof is itself satisfied.
    const Proof vii = lemma_proof("vii", {p, q}, sig);
    for (const ProofLine& line : vii.lines) CHECK(satisfies(m, line.formula));
}

TEST_CASE("deduction transform discharges a hypothesis") {
    const auto sig = prop_sig();
    const Formula p = fml("p", sig), q = fml("q", sig);

    // Self case: from the one-line proof of p under p.
    ProofBuilder self(sig, {}, {p});
    self.extra_hyp(0);
    const Proof self_out = deduction_transform(std::move(self).take(), p);
    CHECK(check_proof(self_out).valid);
    CHECK(self_out.conclusion() == fml("p -> p", sig));
    CHECK(self_out.extra.empty());

    // Pairing under two hypotheses, discharging one of them.
    ProofBuilder pairb(sig, {}, {p, q});
    const std::size_t hp = pairb.extra_hyp(0);
    const std::size_t hq = pairb.extra_hyp(1);
    const std::size_t pair = pairb.pair_intro(p, q);
    pairb.mp(hq, pairb.mp(hp, pair));
    const Proof both = std::move(pairb).take();
    CHECK(both.conclusion() == fml("p /\\ q", sig));

    const Proof dropq = deduction_transform(both, q);
    CHECK(check_proof(dropq).valid);
    CHECK(dropq.conclusion() == fml("q -> (p /\\ q)", sig));
    REQUIRE(dropq.extra.size() == 1);
    CHECK(dropq.extra[0] == p);

    const Proof dropboth = deduction_transform(dropq, p);
    CHECK(check_proof(dropboth).valid);
    CHECK(dropboth.conclusion() == fml("p -> (q -> (p /\\ q))", sig));
    CHECK(dropboth.extra.empty());

    // Theory hypotheses survive untouched.
    ProofBuilder witht(sig, {q}, {p});
    const std::size_t th = witht.hyp(0);
    const std::size_t ex = witht.extra_hyp(0);
    const std::size_t pr2 = witht.pair_intro(q, p);
    witht.mp(ex, witht.mp(th, pr2));
    const Proof out2 = deduction_transform(std::move(witht).take(), p);
    CHECK(check_proof(out2).valid);
    CHECK(out2.theory.size() == 1);
    CHECK(out2.conclusion() == fml("p -> (q /\\ p)", sig));

    // Duplicate hypothesis entries: the first is discharged, later
    // occurrences still refer to the surviving copy.
    ProofBuilder dup(sig, {}, {p, p});
    const std::size_t d0 = dup.extra_hyp(0);
    const std::size_t d1 = dup.extra_hyp(1);
    const std::size_t dp = dup.pair_intro(p, p);
    dup.mp(d1, dup.mp(d0, dp));
    const Proof dupped = deduction_transform(std::move(dup).take(), p);
    CHECK(check_proof(dupped).valid);
    CHECK(dupped.conclusion() == fml("p -> (p /\\ p)", sig));
    CHECK(dupped.extra.size() == 1);

    CHECK_THROWS_AS(deduction_transform(self_out, p), std::invalid_argument); // no hypothesis
    Proof broken = self_out;
    broken.lines.push_back({q, Justification::mp(0, 0)});
    CHECK_THROWS_AS(deduction_transform(broken, p), std::invalid_argument); // does not check
}

TEST_CASE("deduction transform pushes generalization inward") {
    const auto sig = prop_sig();
    const Formula q = fml("q", sig);

    // Under q: P(x) -> q by weakening, then generalize over x.
    ProofBuilder b(sig, {}, {q});
    const std::size_t hypq = b.extra_hyp(0);
    const std::size_t weak = b.weakening(q, fml("P(x)", sig)); // q -> (P(x) -> q)
    const std::size_t open = b.mp(hypq, weak);                 // P(x) -> q
    b.gen(open, "x");
    const Proof in = std::move(b).take();
    CHECK(in.conclusion() == fml("forall x. (P(x) -> q)", sig));

    const Proof out = deduction_transform(in, q);
    CHECK(check_proof(out).valid);
    CHECK(out.conclusion() == fml("q -> (forall x. (P(x) -> q))", sig));
    CHECK(out.extra.empty());

    // The discharged implication is valid in any structure.
    Structure m(sig, {"a"});
    m.set_pred("p", {TruthValue::zero()});
    m.set_pred("q", {TruthValue(Rational(1, 2), Rational(2, 3))});
    m.set_pred("r", {TruthValue::zero()});
    m.set_pred("P", {TruthValue(Rational(1, 4), Rational(1, 4))});
    m.set_pred("Q", {TruthValue::zero()});
    m.set_pred("R", {TruthValue::zero()});
    m.set_func("f", {0});
    m.set_const("c", 0);
    CHECK(satisfies(m, out.conclusion()));
}

TEST_CASE("proof files render and parse back") {
    const auto sig = prop_sig();
    const Formula p = fml("p", sig), q = fml("q", sig);

    const Proof iii = lemma_proof("iii", {p}, sig);
    const std::string text = render_proof(iii);
    const Proof back = parse_proof(text, sig, {});
    CHECK(check_proof(back).valid);
    CHECK(back.conclusion() == iii.conclusion());
    CHECK(render_proof(back) == text);

    const Proof viii = lemma_proof("viii", {p, q, fml("r", sig)}, sig);
    const Proof viii_back = parse_proof(render_proof(viii), sig, {});
    CHECK(check_proof(viii_back).valid);
    CHECK(viii_back.extra.size() == 1);
    CHECK(viii_back.conclusion() == viii.conclusion());

    const std::string handwritten = "# discharge a theory hypothesis into bottom\n"
                                    "extra: q\n"
                                    "\n"
                                    "1. p ; hyp 0\n"
                                    "2. q ; extra 0\n"
                                    "3. q -> 0 ; axiom G0 phi=q\n"
                                    "4. 0 ; mp 2 3\n";
    const Proof hand = parse_proof(handwritten, sig, {p});
    CHECK(check_proof(hand).valid);
    CHECK(hand.extra.size() == 1);
    CHECK(hand.conclusion() == fml("0", sig));

    // Bindings are optional: the checker falls back to recognition.
    const Proof bare = parse_proof("1. p -> (p /\\ p) ; axiom G4\n", sig, {});
    CHECK(check_proof(bare).valid);

    // A wrong claim parses fine and is rejected by the checker.
    const Proof wrong = parse_proof("1. p -> (p /\\ p) ; axiom G2\n", sig, {});
    const CheckReport rep = check_proof(wrong);
    CHECK_FALSE(rep.valid);
    CHECK(rep.bad_line == 1);
    CHECK(rep.reason == "AxiomMismatch");
}

TEST_CASE("proof file parse errors") {
    const auto sig = prop_sig();
    CHECK_THROWS_AS(parse_proof("2. p ; hyp 0\n", sig, {}), ParseError); // must start at 1
    CHECK_THROWS_AS(parse_proof("1. p ; hyp 0\n3. q ; hyp 0\n", sig, {}), ParseError);
    CHECK_THROWS_AS(parse_proof("1. p\n", sig, {}), ParseError); // no justification
    CHECK_THROWS_AS(parse_proof("1. p ; axiom NOPE\n", sig, {}), ParseError);
    CHECK_THROWS_AS(parse_proof("1. p ; axiom G0 psi=q\n", sig, {}), ParseError);
    CHECK_THROWS_AS(parse_proof("1. p ; axiom G0 phi=q, phi=q\n", sig, {}), ParseError);
    CHECK_THROWS_AS(parse_proof("1. p ; wat 0\n", sig, {}), ParseError);
    CHECK_THROWS_AS(parse_proof("1. p ; hyp 0 junk\n", sig, {}), ParseError);
    CHECK_THROWS_AS(parse_proof("1. 0 ; mp 0 1\n", sig, {}), ParseError); // 1-based refs
    CHECK_THROWS_AS(parse_proof("1. p( ; hyp 0\n", sig, {}), ParseError);
    CHECK_THROWS_AS(parse_proof("1. p ; hyp 0\nextra: q\n", sig, {}), ParseError);

    // Unknown symbols in binding values are parse errors too.
    CHECK_THROWS_AS(parse_proof("1. p -> 0 ; axiom G0 phi=zap\n", sig, {}), ParseError);
}
