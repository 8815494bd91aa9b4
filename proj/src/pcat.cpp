#include "flowcat/pcat.hpp"

#include "flowcat/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace flowcat {

std::optional<std::size_t> HomPoset::find(const std::string& label) const
{
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return i;
    return std::nullopt;
}

std::vector<std::pair<std::size_t, std::size_t>> HomPoset::cover_relations() const
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t n = size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b || !le(a, b)) continue;
            bool between = false;
            for (std::size_t c = 0; c < n && !between; ++c)
                if (c != a && c != b && le(a, c) && le(c, b)) between = true;
            if (!between) out.emplace_back(a, b);
        }
    return out;
}

std::optional<std::size_t> HomPoset::minimum() const
{
    for (std::size_t a = 0; a < size(); ++a) {
        bool ok = true;
        for (std::size_t b = 0; b < size() && ok; ++b) ok = le(a, b);
        if (ok) return a;
    }
    return std::nullopt;
}

std::optional<std::size_t> HomPoset::maximum() const
{
    for (std::size_t a = 0; a < size(); ++a) {
        bool ok = true;
        for (std::size_t b = 0; b < size() && ok; ++b) ok = le(b, a);
        if (ok) return a;
    }
    return std::nullopt;
}

std::vector<std::vector<char>> transitive_closure(std::vector<std::vector<char>> rel)
{
    std::size_t n = rel.size();
    for (std::size_t i = 0; i < n; ++i) rel[i][i] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (!rel[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (rel[k][j]) rel[i][j] = 1;
        }
    return rel;
}

PCategory::PCategory(std::vector<std::string> objects)
    : objects_(std::move(objects)), homs_(objects_.size() * objects_.size()), identity_(objects_.size(), 0)
{
    for (std::size_t i = 0; i < objects_.size(); ++i) by_id_.emplace(objects_[i], i);
}

std::optional<std::size_t> PCategory::find_object(const std::string& id) const
{
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

void PCategory::set_hom(std::size_t x, std::size_t y, HomPoset h)
{
    homs_.at(x * objects_.size() + y) = std::move(h);
}

std::vector<std::int32_t>& PCategory::table(std::size_t x, std::size_t y, std::size_t z)
{
    std::uint64_t n = objects_.size();
    std::uint64_t key = (x * n + y) * n + z;
    auto it = compose_.find(key);
    if (it == compose_.end()) {
        std::size_t sz = hom(x, y).size() * hom(y, z).size();
        it = compose_.emplace(key, std::vector<std::int32_t>(sz, undefined)).first;
    }
    return it->second;
}

const std::vector<std::int32_t>* PCategory::table_if(std::size_t x, std::size_t y, std::size_t z) const
{
    std::uint64_t n = objects_.size();
    auto it = compose_.find((x * n + y) * n + z);
    return it == compose_.end() ? nullptr : &it->second;
}

void PCategory::set_compose(const Mor& f, const Mor& g, std::int32_t result_idx)
{
    if (f.dst != g.src) throw ComputationError("set_compose: endpoints do not match");
    table(f.src, f.dst, g.dst)[f.idx * hom(g.src, g.dst).size() + g.idx] = result_idx;
}

std::optional<Mor> PCategory::compose(const Mor& f, const Mor& g) const
{
    if (f.dst != g.src) return std::nullopt;
    if (is_identity(f)) return g;
    if (is_identity(g)) return f;
    const auto* t = table_if(f.src, f.dst, g.dst);
    if (!t) return std::nullopt;
    std::int32_t r = (*t)[f.idx * hom(g.src, g.dst).size() + g.idx];
    if (r == undefined) return std::nullopt;
    return Mor{f.src, g.dst, static_cast<std::size_t>(r)};
}

Mor PCategory::compose_total(const Mor& f, const Mor& g) const
{
    auto r = compose(f, g);
    if (!r) throw ComputationError("composite of " + label(f) + " and " + label(g) + " is undefined");
    return *r;
}

std::optional<Mor> PCategory::find_morphism(std::size_t x, std::size_t y, const std::string& label) const
{
    auto i = hom(x, y).find(label);
    if (!i) return std::nullopt;
    return Mor{x, y, *i};
}

std::vector<Mor> PCategory::morphisms(std::size_t x, std::size_t y) const
{
    std::vector<Mor> out;
    for (std::size_t i = 0; i < hom(x, y).size(); ++i) out.push_back({x, y, i});
    return out;
}

std::size_t PCategory::total_morphisms() const
{
    std::size_t n = 0;
    for (const auto& h : homs_) n += h.size();
    return n;
}

ValidationReport check_pcategory(const PCategory& cat)
{
    ValidationReport rep;
    std::size_t n = cat.num_objects();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            const auto& h = cat.hom(x, y);
            for (std::size_t a = 0; a < h.size(); ++a) {
                if (!h.le(a, a)) rep.add("poset", "order is not reflexive", {h.labels[a]});
                for (std::size_t b = 0; b < h.size(); ++b) {
                    if (a != b && h.le(a, b) && h.le(b, a))
                        rep.add("poset", "order is not antisymmetric", {h.labels[a], h.labels[b]});
                    for (std::size_t c = 0; c < h.size(); ++c)
                        if (h.le(a, b) && h.le(b, c) && !h.le(a, c))
                            rep.add("poset", "order is not transitive", {h.labels[a], h.labels[b], h.labels[c]});
                }
            }
        }
    for (std::size_t x = 0; x < n; ++x) {
        if (cat.hom(x, x).empty()) {
            rep.add("identity", "object has no identity", {cat.object(x)});
            continue;
        }
        for (std::size_t y = 0; y < n; ++y)
            for (const auto& f : cat.morphisms(x, y)) {
                auto l = cat.compose(cat.identity(x), f);
                auto r = cat.compose(f, cat.identity(y));
                if (!l || *l != f || !r || *r != f)
                    rep.add("identity", "identity law fails", {cat.label(f)});
            }
    }
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (cat.hom(x, y).empty()) continue;
            for (std::size_t z = 0; z < n; ++z) {
                if (cat.hom(y, z).empty()) continue;
                for (const auto& f : cat.morphisms(x, y))
                    for (const auto& g : cat.morphisms(y, z)) {
                        auto fg = cat.compose(f, g);
                        for (const auto& f2 : cat.morphisms(x, y))
                            for (const auto& g2 : cat.morphisms(y, z)) {
                                if (!cat.le(f, f2) || !cat.le(g, g2)) continue;
                                auto fg2 = cat.compose(f2, g2);
                                if (fg && fg2 && !cat.le(*fg, *fg2))
                                    rep.add("monotone", "composition is not monotone",
                                            {cat.label(f), cat.label(g), cat.label(f2), cat.label(g2)});
                            }
                        if (!fg) continue;
                        for (std::size_t u = 0; u < n; ++u)
                            for (const auto& h : cat.morphisms(z, u)) {
                                auto gh = cat.compose(g, h);
                                if (!gh) continue;
                                auto a = cat.compose(*fg, h);
                                auto b = cat.compose(f, *gh);
                                if (a && b && *a != *b)
                                    rep.add("associative", "composition is not associative",
                                            {cat.label(f), cat.label(g), cat.label(h)});
                            }
                    }
            }
        }
    return rep;
}

namespace {

std::string join_path(const std::vector<std::string>& cells)
{
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? ">" : "") + cells[i];
    return out;
}

bool is_subsequence(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b)
{
    std::size_t i = 0;
    for (std::size_t j = 0; j < b.size() && i < a.size(); ++j)
        if (a[i] == b[j]) ++i;
    return i == a.size();
}

}  // namespace

std::vector<std::string> split_path(const std::string& label)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : label) {
        if (ch == '>') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

PCategory face_poset_category(const Complex& c)
{
    std::vector<std::string> ids;
    for (const auto& cell : c.cells()) ids.push_back(cell.id);
    PCategory cat(ids);
    std::size_t n = c.size();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (!c.at_or_above(x, y)) continue;
            HomPoset h;
            h.labels.push_back(x == y ? c.id(x) : c.id(x) + ">" + c.id(y));
            h.leq = {{1}};
            cat.set_hom(x, y, std::move(h));
        }
    for (std::size_t x = 0; x < n; ++x) cat.set_identity(x, 0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (!c.at_or_above(x, y)) continue;
            for (std::size_t z = 0; z < n; ++z)
                if (c.at_or_above(y, z)) cat.set_compose({x, y, 0}, {y, z, 0}, 0);
        }
    return cat;
}

PCategory entrance_path_category(const Complex& c)
{
    std::size_t n = c.size();
    std::vector<std::string> ids;
    for (const auto& cell : c.cells()) ids.push_back(cell.id);
    PCategory cat(ids);
    // paths[x][y] lists descending cell sequences from x to y.
    std::vector<std::vector<std::vector<std::vector<std::size_t>>>> paths(
        n, std::vector<std::vector<std::vector<std::size_t>>>(n));
    for (std::size_t x = 0; x < n; ++x) {
        std::vector<std::size_t> cur{x};
        std::function<void()> extend = [&]() {
            paths[x][cur.back()].push_back(cur);
            for (std::size_t y = 0; y < n; ++y)
                if (c.above(cur.back(), y) && std::find(cur.begin(), cur.end(), y) == cur.end()) {
                    cur.push_back(y);
                    extend();
                    cur.pop_back();
                }
        };
        extend();
    }
    std::vector<std::vector<std::map<std::vector<std::size_t>, std::size_t>>> index(
        n, std::vector<std::map<std::vector<std::size_t>, std::size_t>>(n));
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            auto& ps = paths[x][y];
            if (ps.empty()) continue;
            auto names = [&](const std::vector<std::size_t>& p) {
                std::vector<std::string> out;
                for (std::size_t i : p) out.push_back(c.id(i));
                return out;
            };
            std::sort(ps.begin(), ps.end(), [&](const auto& a, const auto& b) { return names(a) < names(b); });
            HomPoset h;
            h.leq.assign(ps.size(), std::vector<char>(ps.size(), 0));
            for (std::size_t i = 0; i < ps.size(); ++i) {
                h.labels.push_back(join_path(names(ps[i])));
                index[x][y][ps[i]] = i;
                for (std::size_t j = 0; j < ps.size(); ++j) h.leq[i][j] = is_subsequence(ps[i], ps[j]);
            }
            cat.set_hom(x, y, std::move(h));
        }
    for (std::size_t x = 0; x < n; ++x) cat.set_identity(x, 0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t a = 0; a < paths[x][y].size(); ++a)
                for (std::size_t z = 0; z < n; ++z)
                    for (std::size_t b = 0; b < paths[y][z].size(); ++b) {
                        auto joined = paths[x][y][a];
                        joined.insert(joined.end(), paths[y][z][b].begin() + 1, paths[y][z][b].end());
                        cat.set_compose({x, y, a}, {y, z, b}, static_cast<std::int32_t>(index[x][z].at(joined)));
                    }
    return cat;
}

PCategory poset_category(const HomPoset& p)
{
    PCategory cat(p.labels);
    std::size_t n = p.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (!p.le(a, b)) continue;
            HomPoset h;
            h.labels.push_back(a == b ? p.labels[a] : p.labels[a] + ">" + p.labels[b]);
            h.leq = {{1}};
            cat.set_hom(a, b, std::move(h));
        }
    for (std::size_t a = 0; a < n; ++a) cat.set_identity(a, 0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (!p.le(a, b)) continue;
            for (std::size_t c = 0; c < n; ++c)
                if (p.le(b, c)) cat.set_compose({a, b, 0}, {b, c, 0}, 0);
        }
    return cat;
}

PCategory full_subcategory(const PCategory& cat, const std::vector<std::size_t>& objects)
{
    std::vector<std::string> ids;
    for (std::size_t o : objects) ids.push_back(cat.object(o));
    PCategory sub(ids);
    std::size_t n = objects.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) sub.set_hom(i, j, cat.hom(objects[i], objects[j]));
        sub.set_identity(i, cat.identity(objects[i]).idx);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (const auto& f : cat.morphisms(objects[i], objects[j]))
                    for (const auto& g : cat.morphisms(objects[j], objects[k])) {
                        auto fg = cat.compose(f, g);
                        sub.set_compose({i, j, f.idx}, {j, k, g.idx},
                                        fg ? static_cast<std::int32_t>(fg->idx) : PCategory::undefined);
                    }
    return sub;
}

bool is_atom(const PCategory& cat, const Mor& f)
{
    std::size_t x = f.src, y = f.dst;
    for (const auto& g : cat.morphisms(x, y))
        if (!cat.le(f, g)) return false;
    if (x == y && !cat.is_identity(f)) return false;
    for (std::size_t z = 0; z < cat.num_objects(); ++z)
        for (const auto& g : cat.morphisms(x, z))
            for (const auto& h : cat.morphisms(z, y)) {
                auto gh = cat.compose(g, h);
                if (!gh || !cat.le(*gh, f)) continue;
                bool trivial_left = z == x && cat.is_identity(g) && h == f;
                bool trivial_right = z == y && g == f && cat.is_identity(h);
                if (!trivial_left && !trivial_right) return false;
            }
    return true;
}

std::optional<Mor> atom(const PCategory& cat, std::size_t x, std::size_t y)
{
    const auto& h = cat.hom(x, y);
    if (h.empty()) return std::nullopt;
    for (std::size_t i = 0; i < h.size(); ++i)
        if (is_atom(cat, {x, y, i})) return Mor{x, y, i};
    throw NoAtom("no atom in hom(" + cat.object(x) + ", " + cat.object(y) + ")");
}

bool is_cellular(const PCategory& cat)
{
    for (std::size_t x = 0; x < cat.num_objects(); ++x)
        for (std::size_t y = 0; y < cat.num_objects(); ++y) {
            try {
                atom(cat, x, y);
            } catch (const NoAtom&) {
                return false;
            }
        }
    return true;
}

std::optional<ExtremalObject> find_homotopy_extremal(const PCategory& cat)
{
    std::size_t n = cat.num_objects();
    for (std::size_t w = 0; w < n; ++w) {
        bool ok = true;
        for (std::size_t z = 0; z < n && ok; ++z) {
            auto m = cat.hom(w, z).minimum();
            ok = m.has_value() && (z != w || *m == cat.identity(w).idx);
        }
        if (ok) return ExtremalObject{w, Extremal::Minimal};
    }
    for (std::size_t z = 0; z < n; ++z) {
        bool ok = true;
        for (std::size_t w = 0; w < n && ok; ++w) {
            auto m = cat.hom(w, z).maximum();
            ok = m.has_value() && (w != z || *m == cat.identity(z).idx);
        }
        if (ok) return ExtremalObject{z, Extremal::Maximal};
    }
    return std::nullopt;
}

}  // namespace flowcat
