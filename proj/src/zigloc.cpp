#include "flowcat/zigloc.hpp"

#include "flowcat/errors.hpp"
#include "flowcat/nerve.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace flowcat {

ZigzagKey zigzag_key(const Zigzag& z)
{
    ZigzagKey key{z.source, z.target, z.backward.size()};
    for (const auto& g : z.forward) {
        key.push_back(g.src);
        key.push_back(g.dst);
        key.push_back(g.idx);
    }
    for (const auto& f : z.backward) {
        key.push_back(f.src);
        key.push_back(f.dst);
        key.push_back(f.idx);
    }
    return key;
}

Zigzag plain_zigzag(const Mor& g) { return Zigzag{g.src, g.dst, {g}, {}}; }

bool well_formed(const PCategory& cat, const MorseSystem& s, const Zigzag& z)
{
    if (z.forward.size() != z.backward.size() + 1) return false;
    std::size_t cur = z.source;
    for (std::size_t i = 0; i < z.forward.size(); ++i) {
        if (z.forward[i].src != cur) return false;
        if (i < z.backward.size()) {
            const Mor& f = z.backward[i];
            if (f.dst != z.forward[i].dst) return false;
            if (!s.contains(f) && !cat.is_identity(f)) return false;
            cur = f.src;
        } else {
            cur = z.forward[i].dst;
        }
    }
    return cur == z.target;
}

Zigzag concatenate(const PCategory& cat, const Zigzag& a, const Zigzag& b)
{
    if (a.target != b.source) throw ComputationError("zigzags do not compose");
    Zigzag out;
    out.source = a.source;
    out.target = b.target;
    out.forward.assign(a.forward.begin(), a.forward.end() - 1);
    out.forward.push_back(cat.compose_total(a.forward.back(), b.forward.front()));
    out.forward.insert(out.forward.end(), b.forward.begin() + 1, b.forward.end());
    out.backward = a.backward;
    out.backward.insert(out.backward.end(), b.backward.begin(), b.backward.end());
    return out;
}

std::string format_zigzag(const PCategory& cat, const Zigzag& z)
{
    std::string out = cat.object(z.source);
    for (std::size_t i = 0; i < z.forward.size(); ++i) {
        auto cells = split_path(cat.label(z.forward[i]));
        for (std::size_t c = 1; c < cells.size(); ++c) out += " > " + cells[c];
        if (i < z.backward.size()) out += " < " + cat.object(z.backward[i].src);
    }
    return out;
}

Zigzag parse_zigzag(const PCategory& cat, const MorseSystem& s, const std::string& text)
{
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < text.size();) {
        char ch = text[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
        } else if (ch == '>' || ch == '<') {
            tokens.emplace_back(1, ch);
            ++i;
        } else if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
            tokens.push_back(text.substr(i, j - i));
            i = j;
        } else {
            throw ParseError("unexpected character '" + std::string(1, ch) + "' in zigzag '" + text + "'");
        }
    }
    if (tokens.empty() || tokens.size() % 2 == 0) throw ParseError("malformed zigzag '" + text + "'");
    auto object = [&](const std::string& id) {
        auto o = cat.find_object(id);
        if (!o) throw ParseError("unknown object '" + id + "' in zigzag '" + text + "'");
        return *o;
    };
    Zigzag z;
    z.source = object(tokens[0]);
    Mor g = cat.identity(z.source);
    std::size_t cur = z.source;
    for (std::size_t i = 1; i < tokens.size(); i += 2) {
        const std::string& op = tokens[i];
        if (op != ">" && op != "<") throw ParseError("expected '>' or '<' in zigzag '" + text + "'");
        std::size_t next = object(tokens[i + 1]);
        if (op == ">") {
            auto step = cat.find_morphism(cur, next, tokens[i - 1] + ">" + tokens[i + 1]);
            if (!step) {
                auto m = cat.morphisms(cur, next);
                if (m.empty()) throw ParseError("no morphism " + tokens[i - 1] + " > " + tokens[i + 1]);
                step = m.front();
            }
            auto c = cat.compose(g, *step);
            if (!c) throw ParseError("cannot compose along '" + text + "'");
            g = *c;
        } else {
            z.forward.push_back(g);
            if (next == cur) {
                z.backward.push_back(cat.identity(cur));
            } else {
                auto idx = s.find(next, cur);
                if (!idx) throw ParseError("'" + tokens[i + 1] + " > " + tokens[i - 1] + "' is not in Sigma");
                z.backward.push_back(s.sigma[*idx]);
            }
            g = cat.identity(next);
        }
        cur = next;
    }
    z.forward.push_back(g);
    z.target = cur;
    return z;
}

namespace {

// Applies the leftmost applicable move; returns false at a fixed point.
bool reduce_once(const PCategory& cat, Zigzag& z)
{
    for (std::size_t i = 0; i < z.backward.size(); ++i) {
        const Mor f = z.backward[i];
        const Mor gi = z.forward[i];
        const Mor gn = z.forward[i + 1];
        auto splice = [&](const Mor& merged) {
            z.forward[i] = merged;
            z.forward.erase(z.forward.begin() + static_cast<long>(i) + 1);
            z.backward.erase(z.backward.begin() + static_cast<long>(i));
        };
        if (cat.is_identity(f)) {
            auto m = cat.compose(gi, gn);
            if (m) {
                splice(*m);
                return true;
            }
        }
        for (const auto& a : cat.morphisms(gi.src, f.src)) {
            auto af = cat.compose(a, f);
            if (!af || *af != gi) continue;
            auto m = cat.compose(a, gn);
            if (!m) continue;
            splice(*m);
            return true;
        }
        for (const auto& h : cat.morphisms(f.dst, gn.dst)) {
            auto fh = cat.compose(f, h);
            if (!fh || *fh != gn) continue;
            auto m = cat.compose(gi, h);
            if (!m) continue;
            splice(*m);
            return true;
        }
    }
    return false;
}

}  // namespace

Zigzag reduce_zigzag(const PCategory& cat, const MorseSystem& s, const Zigzag& z)
{
    if (!well_formed(cat, s, z)) throw ComputationError("reduce_zigzag: malformed zigzag");
    Zigzag out = z;
    while (reduce_once(cat, out)) {
    }
    return out;
}

bool is_irreducible(const PCategory& cat, const MorseSystem&, const Zigzag& z)
{
    Zigzag copy = z;
    return !reduce_once(cat, copy);
}

bool classical_mode(const PCategory& cat, const MorseSystem& s)
{
    for (const auto& f : s.sigma)
        if (cat.hom(f.src, f.dst).size() != 1) return false;
    return true;
}

std::vector<Zigzag> enumerate_zigzags(const PCategory& cat, const MorseSystem& s, std::size_t w, std::size_t z,
                                      int max_len)
{
    bool classical = classical_mode(cat, s);
    if (max_len < 0 && !classical)
        throw ComputationError("unbounded zigzag enumeration requires a classical Morse system");
    std::vector<Zigzag> out;
    std::vector<std::size_t> chain;
    auto emit_products = [&]() {
        std::vector<std::pair<std::size_t, std::size_t>> legs;
        std::size_t cur = w;
        for (std::size_t c : chain) {
            legs.emplace_back(cur, s.sigma[c].dst);
            cur = s.sigma[c].src;
        }
        legs.emplace_back(cur, z);
        std::vector<std::size_t> pick(legs.size(), 0);
        for (;;) {
            Zigzag zz;
            zz.source = w;
            zz.target = z;
            for (std::size_t i = 0; i < legs.size(); ++i) zz.forward.push_back({legs[i].first, legs[i].second, pick[i]});
            for (std::size_t c : chain) zz.backward.push_back(s.sigma[c]);
            out.push_back(std::move(zz));
            std::size_t i = legs.size();
            while (i > 0) {
                --i;
                if (++pick[i] < cat.hom(legs[i].first, legs[i].second).size()) break;
                pick[i] = 0;
                if (i == 0) return;
            }
            if (legs.empty()) return;
        }
    };
    std::function<void()> extend = [&]() {
        std::size_t cur = chain.empty() ? w : s.sigma[chain.back()].src;
        if (!cat.hom(cur, z).empty()) emit_products();
        if (max_len >= 0 && static_cast<int>(chain.size()) >= max_len) return;
        for (std::size_t c = 0; c < s.size(); ++c) {
            if (cat.hom(cur, s.sigma[c].dst).empty()) continue;
            if (classical && std::find(chain.begin(), chain.end(), c) != chain.end()) continue;
            chain.push_back(c);
            extend();
            chain.pop_back();
        }
    };
    extend();
    return out;
}

namespace {

bool related(const PCategory& cat, DiagramMode mode, const std::optional<Mor>& top, const std::optional<Mor>& bottom)
{
    if (!top || !bottom) return false;
    return mode == DiagramMode::Equal ? *top == *bottom : cat.le(*top, *bottom);
}

// Pairs (a, c) with a: g.src -> o, c: o -> g.dst and a then c equal to g.
std::vector<std::pair<Mor, Mor>> factorizations(const PCategory& cat, const Mor& g, std::size_t o)
{
    std::vector<std::pair<Mor, Mor>> out;
    for (const auto& a : cat.morphisms(g.src, o))
        for (const auto& c : cat.morphisms(o, g.dst)) {
            auto ac = cat.compose(a, c);
            if (ac && *ac == g) out.emplace_back(a, c);
        }
    return out;
}

}  // namespace

bool diagram_exists(const PCategory& cat, const MorseSystem& s, const Zigzag& top, const Zigzag& bottom,
                    DiagramMode mode)
{
    if (top.source != bottom.source || top.target != bottom.target) return false;
    std::size_t K = top.backward.size(), Kb = bottom.backward.size();
    using State = std::tuple<std::size_t, std::size_t, Mor, Mor, Mor>;
    std::set<State> seen;
    std::vector<State> stack{{0, 0, top.forward[0], bottom.forward[0], cat.identity(top.source)}};
    (void)s;
    while (!stack.empty()) {
        State st = stack.back();
        stack.pop_back();
        if (!seen.insert(st).second) continue;
        auto [i, j, tR, bR, v] = st;
        if (i == K && j == Kb && related(cat, mode, tR, cat.compose(v, bR))) return true;
        if (i < K && j < Kb && top.backward[i] == bottom.backward[j] && related(cat, mode, tR, cat.compose(v, bR))) {
            std::size_t x = top.backward[i].src;
            stack.emplace_back(i + 1, j + 1, top.forward[i + 1], bottom.forward[j + 1], cat.identity(x));
        }
        if (j < Kb) {
            const Mor& fb = bottom.backward[j];
            for (const auto& [a, c] : factorizations(cat, tR, fb.src))
                if (related(cat, mode, cat.compose(a, fb), cat.compose(v, bR)))
                    stack.emplace_back(i, j + 1, c, bottom.forward[j + 1], cat.identity(fb.src));
        }
        if (i < K) {
            const Mor& ft = top.backward[i];
            for (const auto& [a, c] : factorizations(cat, bR, ft.dst))
                if (related(cat, mode, tR, cat.compose(v, a)))
                    stack.emplace_back(i + 1, j, top.forward[i + 1], c, ft);
        }
    }
    return false;
}

void diagram_partners(const PCategory& cat, const MorseSystem& s, const Zigzag& top, DiagramMode mode,
                      int max_backward, const std::function<void(const Zigzag&)>& emit)
{
    std::size_t K = top.backward.size();
    Zigzag bottom;
    bottom.source = top.source;
    bottom.target = top.target;
    std::set<ZigzagKey> emitted;
    // tR: rest of the current top forward arrow; v: vertical from the top position to the
    // bottom position; pend: bottom forward arrow accumulated since the last bottom backward arrow.
    std::function<void(std::size_t, Mor, Mor, Mor)> step = [&](std::size_t i, Mor tR, Mor v, Mor pend) {
        std::size_t b = v.dst;
        if (i == K) {
            for (const auto& a : cat.morphisms(b, top.target)) {
                if (!related(cat, mode, tR, cat.compose(v, a))) continue;
                auto g = cat.compose(pend, a);
                if (!g) continue;
                bottom.forward.push_back(*g);
                if (emitted.insert(zigzag_key(bottom)).second) emit(bottom);
                bottom.forward.pop_back();
            }
        } else {
            const Mor& f = top.backward[i];
            for (const auto& a : cat.morphisms(b, f.dst)) {
                if (!related(cat, mode, tR, cat.compose(v, a))) continue;
                auto g = cat.compose(pend, a);
                if (!g) continue;
                // Same backward arrow in both rows.
                if (max_backward < 0 || static_cast<int>(bottom.backward.size()) < max_backward) {
                    bottom.forward.push_back(*g);
                    bottom.backward.push_back(f);
                    step(i + 1, top.forward[i + 1], cat.identity(f.src), cat.identity(f.src));
                    bottom.forward.pop_back();
                    bottom.backward.pop_back();
                }
                // Top arrow over a bottom identity column.
                step(i + 1, top.forward[i + 1], f, *g);
            }
        }
        if (max_backward >= 0 && static_cast<int>(bottom.backward.size()) >= max_backward) return;
        // Bottom arrow under a top identity column.
        for (const auto& fb : s.sigma) {
            for (const auto& [a, c] : factorizations(cat, tR, fb.src)) {
                auto topside = cat.compose(a, fb);
                for (const auto& gb : cat.morphisms(b, fb.dst)) {
                    if (!related(cat, mode, topside, cat.compose(v, gb))) continue;
                    auto g = cat.compose(pend, gb);
                    if (!g) continue;
                    bottom.forward.push_back(*g);
                    bottom.backward.push_back(fb);
                    step(i, c, cat.identity(fb.src), cat.identity(fb.src));
                    bottom.forward.pop_back();
                    bottom.backward.pop_back();
                }
            }
        }
    };
    step(0, top.forward[0], cat.identity(top.source), cat.identity(top.source));
}

std::vector<ArrowRole> classify_arrows(const PCategory& cat, const Zigzag& z)
{
    std::vector<ArrowRole> roles;
    std::size_t K = z.backward.size();
    for (std::size_t j = 0; j < K; ++j) {
        const Mor& f = z.backward[j];
        std::size_t before = j == 0 ? z.source : z.backward[j - 1].src;
        std::size_t after = j + 1 == K ? z.target : z.backward[j + 1].dst;
        bool left = false, right = false;
        for (const auto& h : cat.morphisms(before, f.src)) {
            auto hf = cat.compose(h, f);
            if (hf && cat.le(*hf, z.forward[j])) {
                left = true;
                break;
            }
        }
        for (const auto& l : cat.morphisms(f.dst, after)) {
            auto fl = cat.compose(f, l);
            if (fl && cat.le(*fl, z.forward[j + 1])) {
                right = true;
                break;
            }
        }
        roles.push_back(left ? ArrowRole::LeftRedundant : right ? ArrowRole::RightRedundant : ArrowRole::Essential);
    }
    return roles;
}

std::vector<Mor> essential_chain(const PCategory& cat, const Zigzag& z)
{
    auto roles = classify_arrows(cat, z);
    std::vector<Mor> out;
    for (std::size_t j = 0; j < roles.size(); ++j)
        if (roles[j] == ArrowRole::Essential) out.push_back(z.backward[j]);
    return out;
}

std::optional<std::size_t> LocHom::class_of(const Zigzag& z) const
{
    auto it = member_index.find(zigzag_key(z));
    if (it == member_index.end()) return std::nullopt;
    return it->second;
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t a)
    {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

void check_antisymmetric(const HomPoset& p, const std::string& where)
{
    for (std::size_t a = 0; a < p.size(); ++a)
        for (std::size_t b = a + 1; b < p.size(); ++b)
            if (p.le(a, b) && p.le(b, a))
                throw OrderViolation("order on " + where + " is not antisymmetric: " + p.labels[a] + " <=> " +
                                     p.labels[b]);
}

}  // namespace

LocHom hom_poset_loc(const PCategory& cat, const MorseSystem& s, std::size_t w, std::size_t z, int max_len)
{
    bool classical = classical_mode(cat, s);
    LocHom out;
    out.source = w;
    out.target = z;
    out.exact = classical;
    out.max_len = classical ? -1 : max_len;
    auto all = enumerate_zigzags(cat, s, w, z, out.max_len);
    std::map<ZigzagKey, std::size_t> index;
    int longest = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        index.emplace(zigzag_key(all[i]), i);
        longest = std::max(longest, static_cast<int>(all[i].backward.size()));
    }
    UnionFind uf(all.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        diagram_partners(cat, s, all[i], DiagramMode::Equal, longest, [&](const Zigzag& b) {
            auto it = index.find(zigzag_key(b));
            if (it != index.end()) uf.unite(i, it->second);
        });

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < all.size(); ++i) groups[uf.find(i)].push_back(i);
    std::vector<std::string> text(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) text[i] = format_zigzag(cat, all[i]);
    struct Pending {
        std::string label;
        std::vector<std::size_t> members;
        std::size_t canonical;
    };
    std::vector<Pending> pending;
    for (auto& [root, members] : groups) {
        std::optional<std::size_t> best;
        for (std::size_t m : members) {
            if (!is_irreducible(cat, s, all[m])) continue;
            if (!best || text[m] < text[*best]) best = m;
        }
        if (!best)
            for (std::size_t m : members)
                if (!best || text[m] < text[*best]) best = m;
        pending.push_back({text[*best], members, *best});
    }
    std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) { return a.label < b.label; });

    std::vector<std::size_t> class_of(all.size());
    for (std::size_t c = 0; c < pending.size(); ++c) {
        ZigzagClass zc;
        zc.canonical = all[pending[c].canonical];
        zc.essential = essential_chain(cat, zc.canonical);
        for (std::size_t m : pending[c].members) {
            zc.members.push_back(all[m]);
            class_of[m] = c;
            out.member_index.emplace(zigzag_key(all[m]), c);
        }
        out.classes.push_back(std::move(zc));
        out.poset.labels.push_back(pending[c].label);
    }
    std::size_t n = out.classes.size();
    std::vector<std::vector<char>> rel(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < all.size(); ++i)
        diagram_partners(cat, s, all[i], DiagramMode::Order, longest, [&](const Zigzag& b) {
            auto it = index.find(zigzag_key(b));
            if (it != index.end()) rel[class_of[i]][class_of[it->second]] = 1;
        });
    out.poset.leq = transitive_closure(std::move(rel));
    check_antisymmetric(out.poset, "hom(" + cat.object(w) + ", " + cat.object(z) + ")");
    return out;
}

namespace {

FlowCategory assemble_flow(const PCategory& base, const MorseSystem& s, std::vector<LocHom> homs,
                           const PCategory& compose_in, int max_len, bool exact)
{
    FlowCategory flow;
    flow.base_objects = s.critical;
    flow.max_len = max_len;
    flow.exact = exact;
    flow.homs = std::move(homs);
    std::vector<std::string> ids;
    for (std::size_t o : s.critical) ids.push_back(base.object(o));
    flow.cat = PCategory(ids);
    std::size_t n = s.critical.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) flow.cat.set_hom(a, b, flow.loc(a, b).poset);
    for (std::size_t a = 0; a < n; ++a) {
        auto id = flow.loc(a, a).class_of(plain_zigzag(compose_in.identity(s.critical[a])));
        if (!id) throw ComputationError("identity class missing for " + ids[a]);
        flow.cat.set_identity(a, *id);
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                const auto& ab = flow.loc(a, b);
                const auto& bc = flow.loc(b, c);
                const auto& ac = flow.loc(a, c);
                for (std::size_t p = 0; p < ab.classes.size(); ++p)
                    for (std::size_t q = 0; q < bc.classes.size(); ++q) {
                        auto joined = concatenate(compose_in, ab.classes[p].canonical, bc.classes[q].canonical);
                        auto hit = ac.class_of(joined);
                        if (!hit) hit = ac.class_of(reduce_zigzag(compose_in, s, joined));
                        flow.cat.set_compose({a, b, p}, {b, c, q},
                                             hit ? static_cast<std::int32_t>(*hit) : PCategory::undefined);
                    }
            }
    return flow;
}

}  // namespace

FlowCategory flow_category(const PCategory& cat, const MorseSystem& s, int max_len)
{
    bool classical = classical_mode(cat, s);
    std::vector<LocHom> homs;
    for (std::size_t a : s.critical)
        for (std::size_t b : s.critical) homs.push_back(hom_poset_loc(cat, s, a, b, max_len));
    return assemble_flow(cat, s, std::move(homs), cat, classical ? -1 : max_len, classical);
}

std::string to_string(Stability s)
{
    switch (s) {
    case Stability::Exact: return "EXACT";
    case Stability::Stable: return "STABLE";
    case Stability::Unstable: return "UNSTABLE";
    }
    return "?";
}

namespace {

// Whether the flow at the smaller bound embeds into the larger one without merging classes
// or changing the order between them.
bool embeds(const FlowCategory& small, const FlowCategory& large, std::string& why)
{
    for (std::size_t h = 0; h < small.homs.size(); ++h) {
        const auto& a = small.homs[h];
        const auto& b = large.homs[h];
        std::vector<std::size_t> image;
        for (const auto& cls : a.classes) {
            std::optional<std::size_t> target;
            for (const auto& m : cls.members) {
                auto t = b.class_of(m);
                if (!t || (target && *t != *target)) {
                    why = "class " + a.poset.labels[image.size()] + " splits or disappears";
                    return false;
                }
                target = t;
            }
            image.push_back(*target);
        }
        for (std::size_t i = 0; i < image.size(); ++i)
            for (std::size_t j = 0; j < image.size(); ++j) {
                if (i != j && image[i] == image[j]) {
                    why = "classes " + a.poset.labels[i] + " and " + a.poset.labels[j] + " merge";
                    return false;
                }
                if (a.poset.le(i, j) != b.poset.le(image[i], image[j])) {
                    why = "order between " + a.poset.labels[i] + " and " + a.poset.labels[j] + " changes";
                    return false;
                }
            }
    }
    return true;
}

}  // namespace

StabilizedFlow stabilized_flow(const PCategory& cat, const MorseSystem& s, int start_len, int cap,
                               std::size_t maxdim, const Ring& ring)
{
    StabilizedFlow out;
    if (classical_mode(cat, s)) {
        out.flow = flow_category(cat, s, -1);
        out.status = Stability::Exact;
        out.max_len = -1;
        out.nerve = nerve_homology(out.flow.cat, maxdim, ring);
        out.log.push_back("classical Morse system: enumeration is exact");
        return out;
    }
    int L = std::max(start_len, 0);
    FlowCategory cur = flow_category(cat, s, L);
    HomologySummary hcur = nerve_homology(cur.cat, maxdim, ring);
    out.log.push_back("max_len " + std::to_string(L) + ": nerve " + hcur.to_string());
    while (L + 1 <= cap) {
        FlowCategory next = flow_category(cat, s, L + 1);
        HomologySummary hnext = nerve_homology(next.cat, maxdim, ring);
        out.log.push_back("max_len " + std::to_string(L + 1) + ": nerve " + hnext.to_string());
        std::string why;
        bool same = embeds(cur, next, why);
        if (same && !(hcur == hnext)) {
            same = false;
            why = "nerve homology changes";
        }
        if (same) {
            out.flow = std::move(next);
            out.status = Stability::Stable;
            out.max_len = L + 1;
            out.nerve = hnext;
            out.log.push_back("stable between max_len " + std::to_string(L) + " and " + std::to_string(L + 1));
            return out;
        }
        out.log.push_back("not stable at max_len " + std::to_string(L) + ": " + why);
        cur = std::move(next);
        hcur = hnext;
        ++L;
    }
    out.flow = std::move(cur);
    out.status = Stability::Unstable;
    out.max_len = L;
    out.nerve = hcur;
    return out;
}

namespace {

Mor project(const PCategory& fc, const Mor& g)
{
    if (g.src == g.dst) return fc.identity(g.src);
    auto m = fc.morphisms(g.src, g.dst);
    if (m.size() != 1) throw ComputationError("projection target is not a face relation");
    return m.front();
}

Zigzag project(const PCategory& fc, const MorseSystem& fc_s, const Zigzag& z)
{
    Zigzag out;
    out.source = z.source;
    out.target = z.target;
    for (const auto& g : z.forward) out.forward.push_back(project(fc, g));
    for (const auto& f : z.backward) {
        auto idx = fc_s.find(f.src, f.dst);
        if (!idx) throw ComputationError("Sigma element has no face-poset counterpart");
        out.backward.push_back(fc_s.sigma[*idx]);
    }
    return out;
}

}  // namespace

LocHom projected_hom(const PCategory& en, const MorseSystem& en_s, const PCategory& fc, const MorseSystem& fc_s,
                     std::size_t w, std::size_t z)
{
    LocHom src = hom_poset_loc(en, en_s, w, z, -1);
    LocHom out;
    out.source = w;
    out.target = z;
    out.exact = src.exact;
    out.max_len = -1;
    std::map<std::string, std::size_t> by_label;
    std::vector<Zigzag> images;
    std::vector<std::string> labels;
    for (const auto& cls : src.classes) {
        Zigzag img = project(fc, fc_s, cls.canonical);
        std::string label = format_zigzag(fc, img);
        if (by_label.emplace(label, images.size()).second) {
            images.push_back(img);
            labels.push_back(label);
        }
    }
    std::vector<std::size_t> order(images.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
    std::vector<std::size_t> rank(images.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        rank[order[r]] = r;
        ZigzagClass zc;
        zc.canonical = images[order[r]];
        zc.members = {zc.canonical};
        zc.essential = essential_chain(fc, zc.canonical);
        out.member_index.emplace(zigzag_key(zc.canonical), r);
        out.classes.push_back(std::move(zc));
        out.poset.labels.push_back(labels[order[r]]);
    }
    std::size_t n = images.size();
    std::vector<std::vector<char>> rel(n, std::vector<char>(n, 0));
    std::vector<std::size_t> image_of(src.classes.size());
    for (std::size_t c = 0; c < src.classes.size(); ++c)
        image_of[c] = rank[by_label.at(format_zigzag(fc, project(fc, fc_s, src.classes[c].canonical)))];
    for (std::size_t a = 0; a < src.classes.size(); ++a)
        for (std::size_t b = 0; b < src.classes.size(); ++b)
            if (src.poset.le(a, b)) rel[image_of[a]][image_of[b]] = 1;
    out.poset.leq = transitive_closure(std::move(rel));
    check_antisymmetric(out.poset, "projected hom(" + fc.object(w) + ", " + fc.object(z) + ")");
    return out;
}

FlowCategory projected_flow_category(const PCategory& en, const MorseSystem& en_s, const PCategory& fc,
                                     const MorseSystem& fc_s)
{
    std::vector<LocHom> homs;
    for (std::size_t a : en_s.critical)
        for (std::size_t b : en_s.critical) homs.push_back(projected_hom(en, en_s, fc, fc_s, a, b));
    return assemble_flow(fc, en_s, std::move(homs), fc, -1, true);
}

}  // namespace flowcat
