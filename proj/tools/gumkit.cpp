// Command-line front end: parsing, evaluation, proof checking, metric
// validation and quotienting, duality translation, and the bounded
// searches, wired for reproducible batch use. Default output is
// machine-lines (KEY=VALUE records); --human switches to prose.
//
// Exit codes: 0 the property holds / a model was found, 1 a countermodel
// or violation was found, 2 the bounds were exhausted inconclusively,
// 3 input error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gumkit/model_search.hpp"
#include "gumkit/proof_kernel.hpp"
#include "gumkit/ultrametric.hpp"

using namespace gumkit;

namespace {

constexpr const char* kVersion = "gumkit 1.0.0";

// unwinds to main with a ready-to-print diagnostic
struct CliError {
    int code;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError{3, "error: " + path + ": cannot read file"};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

[[noreturn]] void input_error(const std::string& where, const std::exception& e) {
    throw CliError{3, "error: " + where + ": " + e.what()};
}

std::shared_ptr<const Signature> load_signature(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return std::make_shared<Signature>(parse_signature(text));
    } catch (const std::exception& e) {
        input_error(path, e);
    }
}

Structure load_structure(const std::string& path, std::shared_ptr<const Signature> sig) {
    const std::string text = read_file(path);
    try {
        return parse_structure(text, std::move(sig));
    } catch (const std::exception& e) {
        input_error(path, e);
    }
}

std::vector<Formula> load_theory(const std::string& path, const Signature& sig) {
    if (path.empty()) return {};
    const std::string text = read_file(path);
    try {
        return parse_theory(text, sig);
    } catch (const std::exception& e) {
        input_error(path, e);
    }
}

Formula formula_arg(const std::string& text, const Signature& sig) {
    try {
        return parse_formula(text, sig);
    } catch (const std::exception& e) {
        input_error("formula '" + text + "'", e);
    }
}

// search flags shared by the bounded subcommands
struct BoundsArgs {
    std::size_t max_universe = 2;
    std::int64_t denominator = 2;
    std::size_t depth = 2;
    std::size_t max_subset = 2;
    std::uint64_t budget = std::uint64_t{1} << 20;
    std::string pool = "0,1/2,1";

    SearchBounds resolve() const {
        SearchBounds b;
        b.max_universe = max_universe;
        b.grid_denominator = denominator;
        b.sentence_depth = depth;
        b.max_subset = max_subset;
        b.budget = budget;
        std::stringstream in(pool);
        std::string item;
        while (std::getline(in, item, ',')) {
            if (item.empty()) continue;
            try {
                b.constant_pool.push_back(Rational::parse(item));
            } catch (const std::exception& e) {
                input_error("--pool entry '" + item + "'", e);
            }
        }
        return b;
    }
};

void add_bounds_flags(CLI::App* cmd, BoundsArgs& b) {
    cmd->add_option("--max-universe", b.max_universe, "largest universe size scanned");
    cmd->add_option("--grid-denominator", b.denominator, "denominator of the truth-value grid");
    cmd->add_option("--depth", b.depth, "sentence depth for enumerated comparisons");
    cmd->add_option("--max-subset", b.max_subset, "largest theory fragment tried");
    cmd->add_option("--budget", b.budget, "cap on structures drawn from the stream");
    cmd->add_option("--pool", b.pool, "comma-separated rational constants");
}

// one-line structure encoding for WITNESS= fields; the universe part is
// dropped on a single point, so a lone nullary atom reads "p=(1/2,3/4)"
std::string compact_structure(const Structure& m) {
    std::vector<std::string> parts;
    const auto& u = m.universe();
    if (u.size() > 1) {
        std::string names = "universe=";
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (i) names += ",";
            names += u[i];
        }
        parts.push_back(std::move(names));
    }
    const auto tuple_text = [&](const std::vector<std::size_t>& t) {
        std::string s = "(";
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i) s += ",";
            s += u[t[i]];
        }
        return s + ")";
    };
    for (const auto& p : m.sig().predicates) {
        const auto& table = m.pred_table(p.name);
        if (p.arity == 0) {
            parts.push_back(p.name + "=" + table[0].str());
            continue;
        }
        for (std::size_t i = 0; i < table.size(); ++i)
            parts.push_back(p.name + tuple_text(m.tuple_at(i, p.arity)) + "=" + table[i].str());
    }
    for (const auto& f : m.sig().functions) {
        const auto& table = m.func_table(f.name);
        for (std::size_t i = 0; i < table.size(); ++i)
            parts.push_back(f.name + tuple_text(m.tuple_at(i, f.arity)) + "=" + u[table[i]]);
    }
    for (const auto& c : m.sig().constants)
        parts.push_back(c + "=" + u[m.const_value(c)]);
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ";";
        out += parts[i];
    }
    return out;
}

// the spec'd law-violation line: LAW <name> FAIL at <tuple> [n=<k>] lhs=.. rhs=..
std::string law_line(const LawWitness& w, const Structure& m) {
    std::string at;
    if (w.law == "continuity") {
        // the witness carries both tuples back to back
        const std::size_t half = w.elements.size() / 2;
        at = w.symbol + "(";
        for (std::size_t i = 0; i < w.elements.size(); ++i) {
            if (i == half)
                at += ";";
            else if (i)
                at += ",";
            at += m.universe()[w.elements[i]];
        }
        at += ")";
    } else {
        at = "(";
        for (std::size_t i = 0; i < w.elements.size(); ++i) {
            if (i) at += ",";
            at += m.universe()[w.elements[i]];
        }
        at += ")";
    }
    std::string line = "LAW " + w.law + " FAIL at " + at;
    if (w.n) line += " n=" + std::to_string(*w.n);
    line += " lhs=" + w.lhs.str() + " rhs=" + w.rhs.str();
    return line;
}

struct Output {
    bool human = false;
    int code = 0;
};

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int run_parse(const std::string& sig_path, const std::string& formula,
              const std::string& theory_path, const std::string& structure_path, bool human) {
    const auto sig = load_signature(sig_path);
    bool did = false;
    if (!formula.empty()) {
        const Formula f = formula_arg(formula, *sig);
        std::cout << (human ? f.str() : "FORMULA=" + f.str()) << "\n";
        did = true;
    }
    if (!theory_path.empty()) {
        for (const Formula& f : load_theory(theory_path, *sig))
            std::cout << (human ? f.str() : "FORMULA=" + f.str()) << "\n";
        did = true;
    }
    if (!structure_path.empty()) {
        std::cout << render_structure(load_structure(structure_path, sig));
        did = true;
    }
    if (!did) throw CliError{3, "error: parse: give --formula, --theory or --structure"};
    return 0;
}

int run_eval(const std::string& sig_path, const std::string& structure_path,
             const std::string& formula, bool human) {
    const auto sig = load_signature(sig_path);
    const Structure m = load_structure(structure_path, sig);
    const Formula f = formula_arg(formula, *sig);
    TruthValue v;
    try {
        v = eval_formula(m, {}, f);
    } catch (const EvalError& e) {
        input_error("formula '" + formula + "'", e);
    }
    if (human)
        std::cout << "value " << v.str() << "\n";
    else
        std::cout << "VALUE=" << v.str() << "\n";
    return 0;
}

int run_check_proof(const std::string& sig_path, const std::string& theory_path,
                    const std::string& proof_path, bool human) {
    const auto sig = load_signature(sig_path);
    auto theory = load_theory(theory_path, *sig);
    const std::string text = read_file(proof_path);
    Proof p;
    try {
        p = parse_proof(text, sig, std::move(theory));
    } catch (const std::exception& e) {
        input_error(proof_path, e);
    }
    const CheckReport report = check_proof(p);
    if (report.valid) {
        std::cout << (human ? "proof is valid (" + std::to_string(p.lines.size()) + " lines)\n"
                            : "VERDICT=valid\n");
        return 0;
    }
    if (human) {
        std::cout << "proof fails at line " << report.bad_line << ": " << report.reason << "\n";
    } else {
        std::cout << "VERDICT=invalid\n";
        std::cout << "LINE=" << report.bad_line << "\n";
        std::cout << "REASON=" << report.reason << "\n";
    }
    return 1;
}

int report_search(const BoundedVerdict& v, const char* positive, const char* negative,
                  bool positive_is_witness, bool human) {
    if (v.kind != VerdictKind::NoneWithinBounds) {
        if (human) {
            std::cout << positive << ":\n" << render_structure(*v.structure);
        } else {
            std::cout << "VERDICT=" << positive << " WITNESS=" << compact_structure(*v.structure)
                      << "\n";
        }
        return positive_is_witness ? 0 : 1;
    }
    if (v.budget_cut) {
        std::cout << (human ? "inconclusive: the budget ran out before the bounds were covered\n"
                            : "VERDICT=inconclusive REASON=budget-exhausted\n");
        return 2;
    }
    if (human)
        std::cout << negative << "\n";
    else
        std::cout << "VERDICT=" << negative << "\n";
    return positive_is_witness ? 1 : 0;
}

int run_find_model(const std::string& sig_path, const std::string& theory_path,
                   const std::string& formula, const BoundsArgs& bargs, bool human) {
    const auto sig = load_signature(sig_path);
    auto theory = load_theory(theory_path, *sig);
    if (!formula.empty()) theory.push_back(formula_arg(formula, *sig));
    const auto v = find_model(sig, theory, bargs.resolve());
    return report_search(v, human ? "model found" : "model",
                         human ? "no model within the bounds" : "unsatisfiable-within-bounds",
                         true, human);
}

int run_entail(const std::string& sig_path, const std::string& theory_path,
               const std::string& formula, const BoundsArgs& bargs, bool strong, bool human) {
    const auto sig = load_signature(sig_path);
    const auto theory = load_theory(theory_path, *sig);
    const Formula goal = formula_arg(formula, *sig);
    BoundedVerdict v;
    try {
        v = strong ? check_strong_entailment(sig, theory, goal, bargs.resolve())
                   : check_entailment(sig, theory, goal, bargs.resolve());
    } catch (const std::invalid_argument& e) {
        input_error("theory", e);
    }
    return report_search(v, human ? "countermodel found" : "countermodel",
                         human ? "entailment holds within the bounds" : "holds", false, human);
}

int run_approx_entail(const std::string& sig_path, const std::string& theory_path,
                      const std::string& formula, std::int64_t level, const BoundsArgs& bargs,
                      bool human) {
    const auto sig = load_signature(sig_path);
    const auto theory = load_theory(theory_path, *sig);
    const Formula goal = formula_arg(formula, *sig);
    ApproxResult r;
    try {
        r = check_approx_entailment(sig, theory, goal, level, bargs.resolve());
    } catch (const std::invalid_argument& e) {
        input_error("--level", e);
    }
    if (r.found) {
        if (human) {
            std::cout << "a fragment of size " << r.subset.size()
                      << " carries the approximation:\n";
            for (const Formula& f : r.subset) std::cout << "  " << f.str() << "\n";
        } else {
            std::cout << "VERDICT=subset\n";
            for (const Formula& f : r.subset) std::cout << "WITNESS=" << f.str() << "\n";
        }
        return 0;
    }
    std::cout << (human ? "no sufficient fragment within the bounds\n"
                        : "VERDICT=none-within-bounds\n");
    return 2;
}

int run_um_validate(const std::string& sig_path, const std::string& structure_path, bool human) {
    const auto sig = load_signature(sig_path);
    const Structure m = load_structure(structure_path, sig);
    ValidationReport rep;
    try {
        rep = check_uniform_continuity(m);
    } catch (const std::invalid_argument& e) {
        input_error(structure_path, e);
    }
    for (const LawWitness& w : rep.witnesses) std::cout << law_line(w, m) << "\n";
    if (rep.pass) {
        std::cout << (human ? "all laws hold\n" : "VERDICT=valid\n");
        return 0;
    }
    if (human) {
        std::cout << rep.witnesses.size() << " law violation(s)\n";
        if (rep.weak_pass) std::cout << "note: the relaxed (non-strict) reading passes\n";
    } else {
        std::cout << "VERDICT=invalid\n";
        if (rep.weak_pass) std::cout << "REASON=strict-only: the relaxed reading passes\n";
    }
    return 1;
}

int run_um_quotient(const std::string& sig_path, const std::string& structure_path, bool human) {
    const auto sig = load_signature(sig_path);
    const Structure m = load_structure(structure_path, sig);
    try {
        const Quotient q = quotient(m);
        for (std::size_t cls = 0; cls < q.structure.size(); ++cls) {
            std::cout << "# " << q.structure.universe()[cls] << " <-";
            for (std::size_t i = 0; i < q.projection.size(); ++i)
                if (q.projection[i] == cls) std::cout << " " << m.universe()[i];
            std::cout << "\n";
        }
        std::cout << render_structure(q.structure);
        return 0;
    } catch (const NotUniformlyContinuous& e) {
        std::cout << law_line(e.witness, m) << "\n";
        std::cout << (human ? "cannot quotient: the structure fails validation\n"
                            : "VERDICT=not-uniformly-continuous\n");
        return 1;
    } catch (const std::invalid_argument& e) {
        input_error(structure_path, e);
    }
}

int run_translate(const std::string& sig_path, const std::string& structure_path,
                  const BoundsArgs& bargs, bool human) {
    const auto sig = load_signature(sig_path);
    const Structure m = load_structure(structure_path, sig);
    const DualStructure d = to_dual(m);
    std::cout << render_dual_structure(d);
    const SearchBounds bounds = bargs.resolve();
    const auto sample = enumerate_sentences(
        *sig, bounds.sentence_depth, bounds.constant_pool,
        std::min<std::uint64_t>(bounds.budget, 200));
    for (const Formula& f : sample) {
        if (eval_dual(d, {}, f) != tv_u(eval_formula(m, {}, f))) {
            std::cout << (human ? "duality violated by: " + f.str() + "\n"
                                : "VERDICT=duality-violated\nWITNESS=" + f.str() + "\n");
            return 1;
        }
    }
    if (human)
        std::cout << "duality verified on " << sample.size() << " sampled sentences\n";
    else
        std::cout << "VERDICT=duality-verified SAMPLES=" << sample.size() << "\n";
    return 0;
}

int run_weak_equiv(const std::string& sig_path, const std::string& structure_path,
                   const std::string& other_path, const BoundsArgs& bargs, bool human) {
    const auto sig = load_signature(sig_path);
    const Structure m = load_structure(structure_path, sig);
    const Structure n = load_structure(other_path, sig);
    const auto v = weak_equiv_bounded(m, n, bargs.resolve());
    if (v.indistinguishable) {
        std::cout << (human ? "no distinguishing sentence within the bounds\n"
                            : "VERDICT=indistinguishable-within-bounds\n");
        return 0;
    }
    if (human) {
        std::cout << "distinguished by: " << v.witness->str() << "\n";
        std::cout << "degrees " << v.degree_left.str() << " vs " << v.degree_right.str() << "\n";
    } else {
        std::cout << "VERDICT=distinguished\n";
        std::cout << "WITNESS=" << v.witness->str() << "\n";
        std::cout << "DEGREE=" << v.degree_left.str() << "\n";
        std::cout << "DEGREE=" << v.degree_right.str() << "\n";
    }
    return 1;
}

int run_classify_map(const std::string& sig_path, const std::string& structure_path,
                     const std::string& other_path, const std::string& map_text,
                     const BoundsArgs& bargs, bool human) {
    const auto sig = load_signature(sig_path);
    const Structure m = load_structure(structure_path, sig);
    const Structure n = load_structure(other_path, sig);

    // --map a:e1,b:e2 pairs every element of the left universe
    std::vector<std::size_t> j(m.size(), m.size());
    std::vector<bool> seen(m.size(), false);
    std::stringstream in(map_text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw CliError{3, "error: --map entry '" + item + "': expected from:to"};
        try {
            const std::size_t from = m.element_index(item.substr(0, colon));
            j[from] = n.element_index(item.substr(colon + 1));
            seen[from] = true;
        } catch (const std::exception& e) {
            input_error("--map entry '" + item + "'", e);
        }
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            throw CliError{3, "error: --map misses element '" + m.universe()[i] + "'"};

    MapClassification c;
    try {
        c = classify_map(m, n, j, bargs.resolve());
    } catch (const std::invalid_argument& e) {
        input_error("--map", e);
    }

    // the formula-stage grades are claims about the enumerated fragment
    const std::string grade = c.elementary        ? "elementary-within-bounds"
                              : c.weak_elementary ? "weak-elementary-within-bounds"
                              : c.embedding       ? "embedding"
                                                  : "not-embedding";
    std::cout << (human ? "classification: " + grade + "\n" : "VERDICT=" + grade + "\n");
    if (!c.failed_stage.empty()) {
        std::string detail = c.failed_stage + " fails at ";
        if (c.witness_formula)
            detail += "'" + c.witness_formula->str() + "'";
        else
            detail += c.witness_symbol;
        detail += " [";
        for (std::size_t i = 0; i < c.witness_tuple.size(); ++i) {
            if (i) detail += ",";
            detail += m.universe()[c.witness_tuple[i]];
        }
        detail += "]";
        std::cout << (human ? detail + "\n" : "REASON=" + detail + "\n");
    }
    return c.embedding || c.weak_elementary || c.elementary ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic toolkit for rational Goedel and ultrametric logic"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string sig_path, structure_path, other_path, theory_path, proof_path;
    std::string formula, map_text;
    std::int64_t level = 1;
    bool human = false;
    BoundsArgs bounds;

    const auto with_sig = [&](CLI::App* cmd) {
        cmd->add_option("--sig", sig_path, "signature file")->required();
        cmd->add_flag("--human", human, "prose output instead of machine lines");
        return cmd;
    };

    auto* parse_cmd = with_sig(app.add_subcommand("parse", "normalize formulas or structures"));
    parse_cmd->add_option("--formula", formula, "formula text");
    parse_cmd->add_option("--theory", theory_path, "theory file, one sentence per line");
    parse_cmd->add_option("--structure", structure_path, "structure file");

    auto* eval_cmd = with_sig(app.add_subcommand("eval", "evaluate a sentence on a structure"));
    eval_cmd->add_option("--structure", structure_path, "structure file")->required();
    eval_cmd->add_option("--formula", formula, "sentence text")->required();

    auto* proof_cmd = with_sig(app.add_subcommand("check-proof", "check a derivation"));
    proof_cmd->add_option("--theory", theory_path, "theory file");
    proof_cmd->add_option("--proof", proof_path, "proof file")->required();

    auto* find_cmd = with_sig(app.add_subcommand("find-model", "search the grid for a model"));
    find_cmd->add_option("--theory", theory_path, "theory file");
    find_cmd->add_option("--formula", formula, "extra sentence to satisfy");
    add_bounds_flags(find_cmd, bounds);

    auto* entail_cmd = with_sig(app.add_subcommand("entail", "bounded entailment check"));
    entail_cmd->add_option("--theory", theory_path, "theory file");
    entail_cmd->add_option("--formula", formula, "goal sentence")->required();
    add_bounds_flags(entail_cmd, bounds);

    auto* strong_cmd =
        with_sig(app.add_subcommand("strong-entail", "bounded strong entailment check"));
    strong_cmd->add_option("--theory", theory_path, "theory file")->required();
    strong_cmd->add_option("--formula", formula, "goal sentence")->required();
    add_bounds_flags(strong_cmd, bounds);

    auto* approx_cmd =
        with_sig(app.add_subcommand("approx-entail", "find a fragment entailing 1/n -> goal"));
    approx_cmd->add_option("--theory", theory_path, "theory file")->required();
    approx_cmd->add_option("--formula", formula, "goal sentence")->required();
    approx_cmd->add_option("--level", level, "approximation level n")->required();
    add_bounds_flags(approx_cmd, bounds);

    auto* umv_cmd = with_sig(app.add_subcommand("um-validate", "check the metric laws"));
    umv_cmd->add_option("--structure", structure_path, "structure file")->required();

    auto* umq_cmd =
        with_sig(app.add_subcommand("um-quotient", "collapse zero-distance classes"));
    umq_cmd->add_option("--structure", structure_path, "structure file")->required();

    auto* tr_cmd = with_sig(app.add_subcommand("translate", "emit the dual structure"));
    tr_cmd->add_option("--structure", structure_path, "structure file")->required();
    add_bounds_flags(tr_cmd, bounds);

    auto* weq_cmd =
        with_sig(app.add_subcommand("weak-equiv", "compare bounded truth-degree theories"));
    weq_cmd->add_option("--structure", structure_path, "first structure file")->required();
    weq_cmd->add_option("--other", other_path, "second structure file")->required();
    add_bounds_flags(weq_cmd, bounds);

    auto* cls_cmd = with_sig(app.add_subcommand("classify-map", "grade an element map"));
    cls_cmd->add_option("--structure", structure_path, "source structure file")->required();
    cls_cmd->add_option("--other", other_path, "target structure file")->required();
    cls_cmd->add_option("--map", map_text, "element pairs from:to, comma separated")->required();
    add_bounds_flags(cls_cmd, bounds);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 3;
    }

    try {
        if (parse_cmd->parsed())
            return run_parse(sig_path, formula, theory_path, structure_path, human);
        if (eval_cmd->parsed()) return run_eval(sig_path, structure_path, formula, human);
        if (proof_cmd->parsed()) return run_check_proof(sig_path, theory_path, proof_path, human);
        if (find_cmd->parsed())
            return run_find_model(sig_path, theory_path, formula, bounds, human);
        if (entail_cmd->parsed())
            return run_entail(sig_path, theory_path, formula, bounds, false, human);
        if (strong_cmd->parsed())
            return run_entail(sig_path, theory_path, formula, bounds, true, human);
        if (approx_cmd->parsed())
            return run_approx_entail(sig_path, theory_path, formula, level, bounds, human);
        if (umv_cmd->parsed()) return run_um_validate(sig_path, structure_path, human);
        if (umq_cmd->parsed()) return run_um_quotient(sig_path, structure_path, human);
        if (tr_cmd->parsed()) return run_translate(sig_path, structure_path, bounds, human);
        if (weq_cmd->parsed())
            return run_weak_equiv(sig_path, structure_path, other_path, bounds, human);
        if (cls_cmd->parsed())
            return run_classify_map(sig_path, structure_path, other_path, map_text, bounds, human);
    } catch (const CliError& e) {
        std::cerr << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
