#include "flowcat/morse.hpp"

#include "flowcat/errors.hpp"
#include "flowcat/nerve.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace flowcat {

std::string to_string(MatchingKind k) { return k == MatchingKind::Classical ? "classical" : "generalized"; }

std::string to_string(Contractibility c)
{
    switch (c) {
    case Contractibility::Certified: return "CERTIFIED";
    case Contractibility::Acyclic: return "ACYCLIC";
    case Contractibility::Fail: return "FAIL";
    }
    return "?";
}

namespace {

void check_pairs(const Complex& c, const Matching& m)
{
    std::set<std::size_t> used;
    for (const auto& [u, l] : m.pairs) {
        std::string pair = "(" + c.id(u) + ", " + c.id(l) + ")";
        if (!c.above(u, l)) throw BadPair("pair " + pair + ": lower cell is not a face of the upper cell");
        if (m.kind == MatchingKind::Classical && !c.covers_pair(u, l))
            throw BadPair("pair " + pair + ": classical pairs need a codimension-1 face");
        if (!used.insert(u).second) throw BadPair("cell '" + c.id(u) + "' is matched twice");
        if (!used.insert(l).second) throw BadPair("cell '" + c.id(l) + "' is matched twice");
    }
}

bool partner_face(const Complex& c, const Matching& m, std::size_t d, std::size_t upper)
{
    return m.kind == MatchingKind::Classical ? c.covers_pair(upper, d) : c.above(upper, d);
}

}  // namespace

ValidationReport check_acyclic(const Complex& c, const Matching& m)
{
    check_pairs(c, m);
    ValidationReport rep;
    std::size_t n = m.pairs.size();
    // succ[a] lists b with lower(a) < lower(b) in the flow relation.
    std::vector<std::vector<std::size_t>> succ(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a != b && partner_face(c, m, m.pairs[a].second, m.pairs[b].first)) succ[a].push_back(b);
    std::vector<int> color(n, 0);
    std::vector<std::size_t> stack;
    std::vector<std::size_t> cycle;
    std::function<bool(std::size_t)> dfs = [&](std::size_t a) {
        color[a] = 1;
        stack.push_back(a);
        for (std::size_t b : succ[a]) {
            if (color[b] == 1) {
                auto it = std::find(stack.begin(), stack.end(), b);
                cycle.assign(it, stack.end());
                cycle.push_back(b);
                return true;
            }
            if (color[b] == 0 && dfs(b)) return true;
        }
        color[a] = 2;
        stack.pop_back();
        return false;
    };
    for (std::size_t a = 0; a < n && cycle.empty(); ++a)
        if (color[a] == 0) dfs(a);
    if (!cycle.empty()) {
        std::vector<std::string> w;
        for (std::size_t a : cycle) w.push_back(c.id(m.pairs[a].second));
        rep.add("acyclic", "matching relation has a directed cycle", w);
    }
    return rep;
}

std::vector<std::size_t> matching_critical_cells(const Complex& c, const Matching& m)
{
    std::vector<std::size_t> out;
    for (std::size_t z = 0; z < c.size(); ++z) {
        bool covered = false;
        for (const auto& [u, l] : m.pairs) {
            if (m.kind == MatchingKind::Classical)
                covered = covered || z == u || z == l;
            else
                covered = covered || (c.at_or_above(u, z) && c.at_or_above(z, l));
        }
        if (!covered) out.push_back(z);
    }
    return out;
}

std::optional<std::size_t> MorseSystem::find(const Mor& f) const
{
    for (std::size_t i = 0; i < sigma.size(); ++i)
        if (sigma[i] == f) return i;
    return std::nullopt;
}

std::optional<std::size_t> MorseSystem::find(std::size_t src, std::size_t dst) const
{
    for (std::size_t i = 0; i < sigma.size(); ++i)
        if (sigma[i].src == src && sigma[i].dst == dst) return i;
    return std::nullopt;
}

bool MorseSystem::is_critical(std::size_t obj) const
{
    return std::find(critical.begin(), critical.end(), obj) != critical.end();
}

MorseSystem make_morse_system(const PCategory& cat, std::vector<Mor> sigma)
{
    MorseSystem s;
    s.sigma = std::move(sigma);
    std::size_t k = s.sigma.size();
    s.rel.assign(k, std::vector<char>(k, 0));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) s.rel[a][b] = !cat.hom(s.sigma[a].src, s.sigma[b].dst).empty();
    std::vector<char> in_span(cat.num_objects(), 0);
    for (const auto& f : s.sigma) {
        std::vector<std::size_t> sp;
        for (std::size_t w = 0; w < cat.num_objects(); ++w)
            if (!cat.hom(f.src, w).empty() && !cat.hom(w, f.dst).empty()) {
                sp.push_back(w);
                in_span[w] = 1;
            }
        s.span.push_back(std::move(sp));
    }
    for (std::size_t w = 0; w < cat.num_objects(); ++w)
        if (!in_span[w]) s.critical.push_back(w);
    return s;
}

MorseSystem matching_to_morse_system(const PCategory& cat, const Complex& c, const Matching& m)
{
    if (cat.num_objects() != c.size()) throw ComputationError("category does not match the complex");
    std::vector<Mor> sigma;
    for (const auto& [u, l] : m.pairs) {
        auto a = atom(cat, u, l);
        if (!a) throw BadPair("no morphism from '" + c.id(u) + "' to '" + c.id(l) + "'");
        sigma.push_back(*a);
    }
    return make_morse_system(cat, std::move(sigma));
}

ValidationReport validate_morse_system(const PCategory& cat, const MorseSystem& s)
{
    ValidationReport rep;
    std::size_t k = s.size();
    auto name = [&](const Mor& f) { return cat.label(f); };

    for (std::size_t a = 0; a < k; ++a) {
        const Mor& f = s.sigma[a];
        if (f.src == f.dst) rep.add("exhaustion", "Sigma element is an endomorphism", {name(f)});
        if (!is_atom(cat, f)) rep.add("exhaustion", "Sigma element is not the atom of its hom-poset", {name(f)});
        for (std::size_t b = 0; b < k; ++b) {
            if (a == b) continue;
            const Mor& g = s.sigma[b];
            for (std::size_t w : s.span[a])
                if (g.src == w || g.dst == w) {
                    rep.add("exhaustion", "another Sigma element touches the span", {name(f), name(g), cat.object(w)});
                    break;
                }
        }
    }

    auto closure = transitive_closure(s.rel);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            if (closure[a][b] && closure[b][a])
                rep.add("order", "relation on Sigma is not antisymmetric", {name(s.sigma[a]), name(s.sigma[b])});

    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            if (a == b) continue;
            const Mor& f0 = s.sigma[a];
            const Mor& f1 = s.sigma[b];
            // lifting
            for (const auto& g : cat.morphisms(f0.src, f1.src))
                for (const auto& gp : cat.morphisms(f0.dst, f1.dst)) {
                    auto lhs = cat.compose(f0, gp);
                    auto rhs = cat.compose(g, f1);
                    if (!lhs || !rhs || !cat.le(*lhs, *rhs)) continue;
                    bool found = false;
                    for (const auto& p : cat.morphisms(f0.dst, f1.src)) {
                        auto fp = cat.compose(f0, p);
                        auto pf = cat.compose(p, f1);
                        if (fp && pf && cat.le(*fp, g) && cat.le(gp, *pf)) {
                            found = true;
                            break;
                        }
                    }
                    if (!found)
                        rep.add("lifting", "square does not split through a horizontal morphism",
                                {name(f0), name(f1), name(g), name(gp), name(*lhs), name(*rhs)});
                }
            // switching
            if (cat.hom(f0.src, f1.src).empty() || cat.hom(f0.dst, f1.dst).empty()) continue;
            std::optional<Mor> h, l;
            try {
                h = atom(cat, f0.src, f1.src);
                l = atom(cat, f0.dst, f1.dst);
            } catch (const NoAtom& e) {
                rep.add("switching", std::string("atom needed by the switching square is missing: ") + e.what(),
                        {name(f0), name(f1)});
                continue;
            }
            auto f0l = cat.compose(f0, *l);
            auto hf1 = cat.compose(*h, f1);
            if (!f0l || !hf1) continue;
            for (const auto& v : cat.morphisms(f0.src, f1.dst)) {
                if (!cat.le(*f0l, v) || !cat.le(*hf1, v)) continue;
                std::vector<std::string> w{name(f0), name(f1), name(*f0l), name(v), name(*hf1)};
                if (cat.hom(f0.dst, f1.src).empty()) {
                    rep.add("switching", "hom from the target of f0 to the source of f1 is empty", w);
                    continue;
                }
                std::optional<Mor> q;
                try {
                    q = atom(cat, f0.dst, f1.src);
                } catch (const NoAtom&) {
                    rep.add("switching", "switching hom-poset has no atom", w);
                    continue;
                }
                auto f0q = cat.compose(f0, *q);
                auto f0qf1 = f0q ? cat.compose(*f0q, f1) : std::nullopt;
                if (!f0qf1 || !cat.le(*f0qf1, v)) rep.add("switching", "f0 q f1 does not precede v", w);
            }
        }
    return rep;
}

std::vector<std::size_t> restriction_objects(const PCategory& cat, const Mor& f)
{
    std::vector<std::size_t> out;
    for (std::size_t z = 0; z < cat.num_objects(); ++z)
        if (!cat.hom(f.src, z).empty() && cat.hom(z, f.dst).empty()) out.push_back(z);
    return out;
}

PCategory restriction_category(const PCategory& cat, const MorseSystem& s, const Mor& f)
{
    if (!s.contains(f)) throw ComputationError("restriction requested for a morphism outside Sigma");
    return full_subcategory(cat, restriction_objects(cat, f));
}

bool MildnessReport::mild() const
{
    return std::all_of(entries.begin(), entries.end(), [](const MildnessEntry& e) { return e.mild(); });
}

bool collapses_to_point(const HomPoset& p)
{
    if (p.empty()) return false;
    auto sk = order_complex(p);
    std::set<std::vector<std::size_t>> alive;
    for (const auto& dim : sk.simplices)
        for (const auto& s : dim) {
            auto v = s.objects;
            std::sort(v.begin(), v.end());
            alive.insert(v);
        }
    std::map<std::vector<std::size_t>, std::set<std::vector<std::size_t>>> cofaces;
    for (const auto& s : alive)
        if (s.size() > 1)
            for (std::size_t i = 0; i < s.size(); ++i) {
                auto f = s;
                f.erase(f.begin() + static_cast<long>(i));
                cofaces[f].insert(s);
            }
    bool progress = true;
    while (progress && alive.size() > 1) {
        progress = false;
        for (auto it = alive.begin(); it != alive.end(); ++it) {
            const auto& sigma = *it;
            auto cf = cofaces.find(sigma);
            if (cf == cofaces.end() || cf->second.size() != 1) continue;
            auto tau = *cf->second.begin();
            auto tc = cofaces.find(tau);
            if (tc != cofaces.end() && !tc->second.empty()) continue;
            auto sig = sigma;
            for (const auto& x : {tau, sig}) {
                alive.erase(x);
                if (x.size() > 1)
                    for (std::size_t i = 0; i < x.size(); ++i) {
                        auto f = x;
                        f.erase(f.begin() + static_cast<long>(i));
                        cofaces[f].erase(x);
                    }
            }
            progress = true;
            break;
        }
    }
    return alive.size() == 1;
}

MildnessReport check_mildness(const PCategory& cat, const MorseSystem& s)
{
    MildnessReport rep;
    auto closure = transitive_closure(s.rel);
    std::size_t k = s.size();
    for (std::size_t a = 0; a < k; ++a) {
        MildnessEntry e;
        e.f = s.sigma[a];
        for (std::size_t b = 0; b < k && e.chain_terminates; ++b) {
            if (!closure[a][b]) continue;
            for (std::size_t c = 0; c < k; ++c)
                if (c != b && closure[b][c] && closure[c][b]) {
                    e.chain_terminates = false;
                    break;
                }
        }
        e.objects = restriction_objects(cat, e.f);
        for (std::size_t i = 0; i < e.objects.size(); ++i)
            for (std::size_t j = i + 1; j < e.objects.size(); ++j)
                if (!cat.hom(e.objects[i], e.objects[j]).empty() && !cat.hom(e.objects[j], e.objects[i]).empty())
                    e.loopfree = false;
        if (e.objects.empty()) {
            e.verdict = Contractibility::Fail;
            e.reason = "restriction is empty";
            rep.entries.push_back(std::move(e));
            continue;
        }
        PCategory sub = full_subcategory(cat, e.objects);
        if (auto ext = find_homotopy_extremal(sub)) {
            e.verdict = Contractibility::Certified;
            e.reason = std::string("homotopy-") + (ext->kind == Extremal::Maximal ? "maximal" : "minimal") +
                       " object " + sub.object(ext->object);
            rep.entries.push_back(std::move(e));
            continue;
        }
        HomologySummary h;
        if (e.loopfree) {
            HomPoset skel;
            std::size_t n = e.objects.size();
            skel.labels = sub.objects();
            skel.leq.assign(n, std::vector<char>(n, 0));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) skel.leq[i][j] = !sub.hom(i, j).empty();
            skel.leq = transitive_closure(skel.leq);
            if (collapses_to_point(skel)) {
                e.verdict = Contractibility::Certified;
                e.reason = "order complex collapses to a point";
                rep.entries.push_back(std::move(e));
                continue;
            }
            h = order_complex_homology(skel, Ring::integers());
        } else {
            h = nerve_homology(sub, std::min<std::size_t>(e.objects.size() + 1, 4), Ring::integers());
        }
        auto rb = reduced_betti(h);
        bool acyclic = std::all_of(rb.begin(), rb.end(), [](std::size_t b) { return b == 0; });
        for (const auto& d : h.degrees) acyclic = acyclic && d.torsion.empty();
        e.verdict = acyclic ? Contractibility::Acyclic : Contractibility::Fail;
        e.reason = acyclic ? "reduced homology vanishes" : "reduced homology " + h.to_string() + " is nonzero";
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

}  // namespace flowcat
