#include "gumkit/proof_kernel.hpp"

#include <stdexcept>

namespace gumkit {

namespace {

Substitution one_formula(const char* key, Formula f) {
    Substitution s;
    s.emplace(key, MetaValue::of_formula(std::move(f)));
    return s;
}

// ((phi->psi) -> (psi->phi)) -> (psi->phi), built inside an ongoing proof.
// Instantiating G6 at chi := psi->phi turns its middle antecedent into the
// tautology (psi->phi) -> (psi->phi), which assertion discharges.
std::size_t case_collapse(ProofBuilder& b, const Formula& phi, const Formula& psi) {
    const Formula t = Formula::imp(psi, phi);
    const Formula r = Formula::imp(t, t);
    Substitution s = one_formula("phi", phi);
    s.emplace("psi", MetaValue::of_formula(psi));
    s.emplace("chi", MetaValue::of_formula(t));
    const std::size_t split = b.axiom(SchemaId::G6, std::move(s)); // X -> (R -> t)
    const std::size_t identity = b.refl(t);                        // R
    const std::size_t fire = b.assertion(r, t);                    // R -> ((R->t) -> t)
    const std::size_t discharge = b.mp(identity, fire);            // (R->t) -> t
    return b.chain(split, discharge);                              // X -> t
}

} // namespace

Proof lemma_proof(const std::string& name, const std::vector<Formula>& args,
                  std::shared_ptr<const Signature> sig) {
    if (!sig) throw std::invalid_argument("lemma_proof: null signature");
    auto want = [&](std::size_t n) {
        if (args.size() != n)
            throw std::invalid_argument("lemma '" + name + "' takes " + std::to_string(n) +
                                        " arguments, got " + std::to_string(args.size()));
    };
    std::vector<Formula> a;
    a.reserve(args.size());
    for (const Formula& f : args) a.push_back(desugar(f));

    if (name == "refl") {
        want(1);
        ProofBuilder b(sig);
        b.refl(a[0]);
        return std::move(b).take();
    }
    if (name == "i") {
        want(2);
        ProofBuilder b(sig);
        b.weakening(a[0], a[1]);
        return std::move(b).take();
    }
    if (name == "ii") {
        want(2);
        ProofBuilder b(sig);
        b.pair_intro(a[0], a[1]);
        return std::move(b).take();
    }
    if (name == "iii") {
        want(1);
        ProofBuilder b(sig);
        const Formula zero = Formula::rat(Rational(0));
        const std::size_t identity = b.refl(zero); // 0 -> 0
        const std::size_t drop =
            b.axiom(SchemaId::G0, one_formula("phi", Formula::imp(zero, zero)));
        const std::size_t truth = b.mp(identity, drop);   // 0
        const std::size_t fire = b.assertion(zero, a[0]); // 0 -> ((0->phi) -> phi)
        b.mp(truth, fire);
        return std::move(b).take();
    }
    if (name == "iv") {
        want(2);
        ProofBuilder b(sig, {}, {a[0], a[1]});
        const std::size_t left = b.extra_hyp(0);
        const std::size_t right = b.extra_hyp(1);
        const std::size_t pair = b.pair_intro(a[0], a[1]);
        b.mp(right, b.mp(left, pair));
        return std::move(b).take();
    }
    if (name == "v") {
        want(3);
        ProofBuilder b(sig, {}, {Formula::imp(a[0], a[1]), Formula::imp(a[1], a[2])});
        const std::size_t first = b.extra_hyp(0);
        const std::size_t second = b.extra_hyp(1);
        Substitution s = one_formula("phi", a[0]);
        s.emplace("psi", MetaValue::of_formula(a[1]));
        s.emplace("chi", MetaValue::of_formula(a[2]));
        const std::size_t tr = b.axiom(SchemaId::G1, std::move(s));
        b.mp(second, b.mp(first, tr));
        return std::move(b).take();
    }
    if (name == "vi") {
        want(2);
        ProofBuilder b(sig);
        case_collapse(b, a[0], a[1]);
        return std::move(b).take();
    }
    if (name == "vii") {
        want(2);
        // phi -> (phi \/ psi), with the disjunction spelled out as
        // A /\ B for A = (phi->psi)->psi and B = (psi->phi)->phi. Both
        // conjuncts follow from phi, and mp_under joins them under it.
        const Formula& phi = a[0];
        const Formula& psi = a[1];
        const Formula first = Formula::imp(Formula::imp(phi, psi), psi);
        const Formula second = Formula::imp(Formula::imp(psi, phi), phi);
        ProofBuilder b(sig);
        const std::size_t to_first = b.assertion(phi, psi);                  // phi -> A
        const std::size_t to_second = b.weakening(phi, Formula::imp(psi, phi)); // phi -> B
        const std::size_t pair = b.pair_intro(first, second); // A -> (B -> (A/\B))
        const std::size_t half = b.chain(to_first, pair);     // phi -> (B -> (A/\B))
        b.mp_under(to_second, half);                          // phi -> (A/\B)
        return std::move(b).take();
    }
    if (name == "viii") {
        want(3);
        // (phi->psi)->chi |- (psi->phi) \/ chi. The disjunction desugars
        // to D1 /\ D2 for D1 = ((psi->phi)->chi)->chi and
        // D2 = (chi->(psi->phi))->(psi->phi): D1 is the hypothesis pushed
        // through G6, D2 chains the hypothesis into the case collapse.
        const Formula& phi = a[0];
        const Formula& psi = a[1];
        const Formula& chi = a[2];
        const Formula turned = Formula::imp(psi, phi);
        const Formula d1 = Formula::imp(Formula::imp(turned, chi), chi);
        const Formula d2 = Formula::imp(Formula::imp(chi, turned), turned);
        ProofBuilder b(sig, {}, {Formula::imp(Formula::imp(phi, psi), chi)});
        Substitution s = one_formula("phi", phi);
        s.emplace("psi", MetaValue::of_formula(psi));
        s.emplace("chi", MetaValue::of_formula(chi));
        const std::size_t split = b.axiom(SchemaId::G6, std::move(s)); // H -> D1
        const std::size_t given = b.extra_hyp(0);
        const std::size_t left = b.mp(given, split); // D1
        Substitution tr = one_formula("phi", Formula::imp(phi, psi));
        tr.emplace("psi", MetaValue::of_formula(chi));
        tr.emplace("chi", MetaValue::of_formula(turned));
        const std::size_t lift = b.axiom(SchemaId::G1, std::move(tr));
        const std::size_t into = b.mp(given, lift); // (chi->(psi->phi)) -> X
        const std::size_t collapse = case_collapse(b, phi, psi);
        const std::size_t right = b.chain(into, collapse); // D2
        const std::size_t pair = b.pair_intro(d1, d2);
        b.mp(right, b.mp(left, pair)); // D1 /\ D2
        return std::move(b).take();
    }
    throw std::invalid_argument("unknown lemma '" + name + "'");
}

} // namespace gumkit
