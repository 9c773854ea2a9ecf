#include "gumkit/model_search.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace gumkit {

namespace {

std::size_t power(std::size_t base, std::size_t exp) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < exp; ++i) out *= base;
    return out;
}

void require_same_signature(const Structure& m, const Structure& n, const char* who) {
    if (render_signature(m.sig()) != render_signature(n.sig()))
        throw std::invalid_argument(std::string(who) + ": structures use different signatures");
}

// First structure of the stream satisfying the predicate. The stream is
// drawn in contiguous chunks; with several workers each takes a slice of
// the chunk and reports its slice-first hit, and the smallest index
// wins, so the answer never depends on the worker count.
template <typename Pred>
std::optional<Structure> first_matching(StructureEnumerator& stream, const Pred& hit) {
    const std::size_t workers = worker_count();
    const std::size_t chunk_size = workers == 1 ? 1 : 64 * workers;
    std::vector<Structure> chunk;
    chunk.reserve(chunk_size);
    for (;;) {
        chunk.clear();
        while (chunk.size() < chunk_size) {
            auto m = stream.next();
            if (!m) break;
            chunk.push_back(std::move(*m));
        }
        if (chunk.empty()) return std::nullopt;
        if (workers == 1) {
            if (hit(chunk.front())) return std::move(chunk.front());
            continue;
        }
        std::vector<std::size_t> local(workers, chunk.size());
        const std::size_t slice = (chunk.size() + workers - 1) / workers;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                const std::size_t lo = std::min(w * slice, chunk.size());
                const std::size_t hi = std::min(lo + slice, chunk.size());
                for (std::size_t i = lo; i < hi; ++i) {
                    if (hit(chunk[i])) {
                        local[w] = i;
                        break;
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        const std::size_t best = *std::min_element(local.begin(), local.end());
        if (best < chunk.size()) return std::move(chunk[best]);
    }
}

} // namespace

std::vector<TruthValue> grid_points(std::int64_t denominator) {
    if (denominator < 1) throw std::invalid_argument("grid_points: denominator must be positive");
    std::vector<TruthValue> out;
    out.reserve(static_cast<std::size_t>((denominator + 1) * (denominator + 1) - denominator));
    for (std::int64_t p = 0; p <= denominator; ++p)
        for (std::int64_t q = 0; q <= denominator; ++q) {
            if (p == 0 && q > 0) continue;
            out.emplace_back(Rational(p, denominator), Rational(q, denominator));
        }
    return out;
}

StructureEnumerator::StructureEnumerator(std::shared_ptr<const Signature> sig,
                                         const SearchBounds& bounds)
    : sig_(std::move(sig)), bounds_(bounds), grid_(grid_points(bounds.grid_denominator)) {
    if (!sig_) throw std::invalid_argument("enumerator: null signature");
    if (bounds_.max_universe < 1)
        throw std::invalid_argument("enumerator: max_universe must be positive");
    if (bounds_.budget < 1) throw std::invalid_argument("enumerator: budget must be positive");
    sig_->validate();
}

void StructureEnumerator::start_size(std::size_t u) {
    universe_ = u;
    names_.clear();
    for (std::size_t i = 1; i <= u; ++i) names_.push_back("e" + std::to_string(i));
    digits_.clear();
    radix_.clear();
    pred_cells_ = 0;
    for (const auto& p : sig_->predicates) pred_cells_ += power(u, p.arity);
    for (std::size_t i = 0; i < pred_cells_; ++i) radix_.push_back(grid_.size());
    for (const auto& f : sig_->functions)
        for (std::size_t i = 0; i < power(u, f.arity); ++i) radix_.push_back(u);
    for (std::size_t i = 0; i < sig_->constants.size(); ++i) radix_.push_back(u);
    digits_.assign(radix_.size(), 0);
}

bool StructureEnumerator::advance() {
    for (std::size_t i = digits_.size(); i-- > 0;) {
        if (++digits_[i] < radix_[i]) return true;
        digits_[i] = 0;
    }
    return false;
}

Structure StructureEnumerator::build() const {
    Structure m(sig_, names_);
    std::size_t cell = 0;
    for (const auto& p : sig_->predicates) {
        std::vector<TruthValue> table;
        table.reserve(power(universe_, p.arity));
        for (std::size_t i = 0; i < power(universe_, p.arity); ++i)
            table.push_back(grid_[digits_[cell++]]);
        m.set_pred(p.name, std::move(table));
    }
    for (const auto& f : sig_->functions) {
        std::vector<std::size_t> table;
        table.reserve(power(universe_, f.arity));
        for (std::size_t i = 0; i < power(universe_, f.arity); ++i)
            table.push_back(digits_[cell++]);
        m.set_func(f.name, std::move(table));
    }
    for (const auto& c : sig_->constants) m.set_const(c, digits_[cell++]);
    return m;
}

std::optional<Structure> StructureEnumerator::next() {
    if (exhausted_) return std::nullopt;
    if (universe_ > bounds_.max_universe) return std::nullopt;
    if (produced_ >= bounds_.budget) {
        exhausted_ = true;
        return std::nullopt;
    }
    if (universe_ == 0) {
        start_size(1);
    } else if (!advance()) {
        if (universe_ + 1 > bounds_.max_universe) {
            universe_ = bounds_.max_universe + 1;
            return std::nullopt;
        }
        start_size(universe_ + 1);
    }
    ++produced_;
    return build();
}

BoundedVerdict find_model(std::shared_ptr<const Signature> sig, const std::vector<Formula>& theory,
                          const SearchBounds& bounds) {
    StructureEnumerator stream(sig, bounds);
    auto hit = first_matching(stream, [&](const Structure& m) { return models_theory(m, theory); });
    if (!hit) return {VerdictKind::NoneWithinBounds, std::nullopt, stream.budget_exhausted()};
    return {VerdictKind::Found, std::move(hit), false};
}

BoundedVerdict check_entailment(std::shared_ptr<const Signature> sig,
                                const std::vector<Formula>& theory, const Formula& phi,
                                const SearchBounds& bounds) {
    StructureEnumerator stream(sig, bounds);
    auto hit = first_matching(stream, [&](const Structure& m) {
        return models_theory(m, theory) && !satisfies(m, phi);
    });
    if (!hit) return {VerdictKind::NoneWithinBounds, std::nullopt, stream.budget_exhausted()};
    return {VerdictKind::RefutedBy, std::move(hit), false};
}

BoundedVerdict check_strong_entailment(std::shared_ptr<const Signature> sig,
                                       const std::vector<Formula>& theory, const Formula& phi,
                                       const SearchBounds& bounds) {
    if (theory.empty())
        throw std::invalid_argument("strong entailment is defined over a nonempty theory");
    StructureEnumerator stream(sig, bounds);
    auto hit = first_matching(stream, [&](const Structure& m) {
        const TruthValue goal = eval_formula(m, {}, phi);
        TruthValue best = eval_formula(m, {}, theory.front());
        for (std::size_t i = 1; i < theory.size(); ++i)
            best = tv_max(best, eval_formula(m, {}, theory[i]));
        return goal > best;
    });
    if (!hit) return {VerdictKind::NoneWithinBounds, std::nullopt, stream.budget_exhausted()};
    return {VerdictKind::RefutedBy, std::move(hit), false};
}

ApproxResult check_approx_entailment(std::shared_ptr<const Signature> sig,
                                     const std::vector<Formula>& theory, const Formula& phi,
                                     std::int64_t n, const SearchBounds& bounds) {
    if (n < 1) throw std::invalid_argument("approximation level must be positive");
    const Formula target = Formula::imp(Formula::rat(Rational(1, n)), phi);
    const std::size_t cap = std::min(bounds.max_subset, theory.size());
    for (std::size_t size = 1; size <= cap; ++size) {
        // lexicographically ordered index combinations of the given size
        std::vector<std::size_t> pick(size);
        for (std::size_t i = 0; i < size; ++i) pick[i] = i;
        for (;;) {
            std::vector<Formula> subset;
            subset.reserve(size);
            for (std::size_t i : pick) subset.push_back(theory[i]);
            if (check_entailment(sig, subset, target, bounds).kind ==
                VerdictKind::NoneWithinBounds) {
                // independent confirmation: re-scan the whole space for a
                // model of the subset missing the target
                StructureEnumerator confirm(sig, bounds);
                bool refuted = false;
                while (auto m = confirm.next()) {
                    if (models_theory(*m, subset) && !satisfies(*m, target)) {
                        refuted = true;
                        break;
                    }
                }
                if (!refuted) return {true, std::move(subset)};
            }
            // advance the combination
            std::size_t i = size;
            bool more = false;
            while (i-- > 0) {
                if (pick[i] + (size - i) < theory.size()) {
                    more = true;
                    break;
                }
            }
            if (!more) break;
            ++pick[i];
            for (std::size_t j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return {};
}

NotOrderPreserving::NotOrderPreserving(std::pair<TruthValue, TruthValue> lower_,
                                       std::pair<TruthValue, TruthValue> upper_)
    : std::invalid_argument("order map pairs " + lower_.first.str() + "->" + lower_.second.str() +
                            " and " + upper_.first.str() + "->" + upper_.second.str() +
                            " are not strictly order preserving"),
      lower(std::move(lower_)), upper(std::move(upper_)) {}

AnchorConflict::AnchorConflict(std::pair<TruthValue, TruthValue> lower_,
                               std::pair<TruthValue, TruthValue> upper_)
    : std::invalid_argument("order map pattern conflicts with the anchor identity between " +
                            lower_.first.str() + "->" + lower_.second.str() + " and " +
                            upper_.first.str() + "->" + upper_.second.str()),
      lower(std::move(lower_)), upper(std::move(upper_)) {}

DomainNotClosed::DomainNotClosed(TruthValue missing_)
    : std::invalid_argument("order map domain misses the value " + missing_.str()),
      missing(std::move(missing_)) {}

OrderMap construct_order_map(std::vector<std::pair<TruthValue, TruthValue>> pattern,
                             std::vector<Rational> anchors) {
    std::sort(anchors.begin(), anchors.end());
    anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());

    struct Entry {
        std::pair<TruthValue, TruthValue> pair;
        bool anchor;
    };
    std::vector<Entry> entries;
    entries.reserve(anchors.size() + pattern.size());
    for (const Rational& r : anchors) {
        const TruthValue v = TruthValue::hat(r);
        entries.push_back({{v, v}, true});
    }
    for (auto& p : pattern) entries.push_back({std::move(p), false});
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.pair.first < b.pair.first;
    });

    std::vector<Entry> merged;
    for (auto& e : entries) {
        if (!merged.empty() && merged.back().pair.first == e.pair.first) {
            if (merged.back().pair.second != e.pair.second) {
                if (merged.back().anchor || e.anchor)
                    throw AnchorConflict(merged.back().pair, e.pair);
                throw NotOrderPreserving(merged.back().pair, e.pair);
            }
            merged.back().anchor = merged.back().anchor || e.anchor;
            continue;
        }
        merged.push_back(std::move(e));
    }
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        if (!(merged[i].pair.second < merged[i + 1].pair.second)) {
            if (merged[i].anchor || merged[i + 1].anchor)
                throw AnchorConflict(merged[i].pair, merged[i + 1].pair);
            throw NotOrderPreserving(merged[i].pair, merged[i + 1].pair);
        }
    }

    OrderMap h;
    h.anchors_ = std::move(anchors);
    h.graph_.reserve(merged.size());
    for (auto& e : merged) h.graph_.push_back(std::move(e.pair));
    return h;
}

bool OrderMap::in_domain(const TruthValue& v) const {
    const auto it = std::lower_bound(graph_.begin(), graph_.end(), v,
                                     [](const auto& e, const TruthValue& x) { return e.first < x; });
    return it != graph_.end() && it->first == v;
}

TruthValue OrderMap::apply(const TruthValue& v) const {
    const auto it = std::lower_bound(graph_.begin(), graph_.end(), v,
                                     [](const auto& e, const TruthValue& x) { return e.first < x; });
    if (it != graph_.end() && it->first == v) return it->second;
    // linear interpolation between neighbours of the same first coordinate
    if (it != graph_.begin() && it != graph_.end()) {
        const auto& lo = *std::prev(it);
        const auto& hi = *it;
        if (lo.first.first() == v.first() && hi.first.first() == v.first()) {
            const Rational t =
                (v.second() - lo.first.second()) / (hi.first.second() - lo.first.second());
            const Rational x =
                lo.second.first() + t * (hi.second.first() - lo.second.first());
            const Rational y =
                lo.second.second() + t * (hi.second.second() - lo.second.second());
            return TruthValue(x, y);
        }
    }
    throw DomainNotClosed(v);
}

bool OrderMap::moves_any() const {
    return std::any_of(graph_.begin(), graph_.end(),
                       [](const auto& e) { return e.first != e.second; });
}

std::vector<TruthValue> attained_values(const Structure& m) {
    std::vector<TruthValue> out{TruthValue::zero()};
    for (const auto& p : m.sig().predicates) {
        const auto& table = m.pred_table(p.name);
        out.insert(out.end(), table.begin(), table.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Structure h_remap(const Structure& m, const OrderMap& h) {
    for (const TruthValue& v : attained_values(m))
        if (!h.in_domain(v)) throw DomainNotClosed(v);
    Structure out = m;
    for (const auto& p : m.sig().predicates) {
        std::vector<TruthValue> table = m.pred_table(p.name);
        for (TruthValue& v : table) v = h.apply(v);
        out.set_pred(p.name, std::move(table));
    }
    return out;
}

MapClassification classify_map(const Structure& m, const Structure& n,
                               const std::vector<std::size_t>& j, const SearchBounds& bounds) {
    require_same_signature(m, n, "classify_map");
    if (j.size() != m.size())
        throw std::invalid_argument("classify_map: the map must cover the whole universe");
    for (std::size_t e : j)
        if (e >= n.size())
            throw std::invalid_argument("classify_map: image element out of range");

    MapClassification out;
    const auto mapped = [&](const std::vector<std::size_t>& tuple) {
        std::vector<std::size_t> image;
        image.reserve(tuple.size());
        for (std::size_t e : tuple) image.push_back(j[e]);
        return image;
    };

    // the three stages are separate claims: exact atomic carry-over can
    // fail while every truth degree still agrees, so each one is checked
    // and only the witness comes from the first that breaks
    std::string emb_symbol;
    std::vector<std::size_t> emb_tuple;
    bool emb_ok = true;
    for (const auto& c : m.sig().constants) {
        if (j[m.const_value(c)] != n.const_value(c)) {
            emb_ok = false;
            emb_symbol = c;
            emb_tuple = {m.const_value(c)};
            break;
        }
    }
    for (const auto& f : m.sig().functions) {
        if (!emb_ok) break;
        for (std::size_t i = 0; i < power(m.size(), f.arity); ++i) {
            const auto tuple = m.tuple_at(i, f.arity);
            if (j[m.func_value(f.name, tuple)] != n.func_value(f.name, mapped(tuple))) {
                emb_ok = false;
                emb_symbol = f.name;
                emb_tuple = tuple;
                break;
            }
        }
    }
    for (const auto& p : m.sig().predicates) {
        if (!emb_ok) break;
        for (std::size_t i = 0; i < power(m.size(), p.arity); ++i) {
            const auto tuple = m.tuple_at(i, p.arity);
            if (m.pred_value(p.name, tuple) != n.pred_value(p.name, mapped(tuple))) {
                emb_ok = false;
                emb_symbol = p.name;
                emb_tuple = tuple;
                break;
            }
        }
    }
    out.embedding = emb_ok;

    // one sweep over the enumerated fragment records the first degree
    // mismatch and the first value mismatch; a degree mismatch is also a
    // value mismatch, so the sweep may stop there
    std::optional<Formula> weak_witness, full_witness;
    std::vector<std::size_t> weak_tuple, full_tuple;
    const auto formulas = enumerate_sentences(m.sig(), bounds.sentence_depth,
                                              bounds.constant_pool, bounds.budget, 2);
    for (const Formula& f : formulas) {
        if (weak_witness) break;
        for (std::size_t a = 0; a < m.size() && !weak_witness; ++a) {
            for (std::size_t b = 0; b < m.size(); ++b) {
                const Assignment env_m{{"v1", a}, {"v2", b}};
                const Assignment env_n{{"v1", j[a]}, {"v2", j[b]}};
                const TruthValue vm = eval_formula(m, env_m, f);
                const TruthValue vn = eval_formula(n, env_n, f);
                if (!full_witness && vm != vn) {
                    full_witness = f;
                    full_tuple = {a, b};
                }
                if (vm.first() != vn.first()) {
                    weak_witness = f;
                    weak_tuple = {a, b};
                    break;
                }
            }
        }
    }
    out.weak_elementary = !weak_witness;
    out.elementary = !full_witness;

    if (!emb_ok) {
        out.failed_stage = "embedding";
        out.witness_symbol = emb_symbol;
        out.witness_tuple = emb_tuple;
    } else if (weak_witness) {
        out.failed_stage = "weak-elementary";
        out.witness_formula = std::move(weak_witness);
        out.witness_tuple = std::move(weak_tuple);
    } else if (full_witness) {
        out.failed_stage = "elementary";
        out.witness_formula = std::move(full_witness);
        out.witness_tuple = std::move(full_tuple);
    }
    return out;
}

WeakEquivVerdict weak_equiv_bounded(const Structure& m, const Structure& n,
                                    const SearchBounds& bounds) {
    require_same_signature(m, n, "weak_equiv_bounded");
    WeakEquivVerdict verdict;
    for (const Formula& f : enumerate_sentences(m.sig(), bounds.sentence_depth,
                                                bounds.constant_pool, bounds.budget)) {
        const Rational dm = truth_degree(m, f);
        const Rational dn = truth_degree(n, f);
        if (dm != dn) {
            verdict.indistinguishable = false;
            verdict.witness = f;
            verdict.degree_left = dm;
            verdict.degree_right = dn;
            return verdict;
        }
    }
    verdict.indistinguishable = true;
    return verdict;
}

std::size_t worker_count() {
    if (const char* env = std::getenv("GUMKIT_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != nullptr && *end == '\0' && v > 0)
            return static_cast<std::size_t>(std::min<long>(v, 64));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return std::clamp<std::size_t>(hw == 0 ? 1 : hw, 1, 8);
}

} // namespace gumkit
