#include "flowcat/cellcx.hpp"

#include "flowcat/errors.hpp"

#include <algorithm>
#include <numeric>
#include <regex>
#include <set>

namespace flowcat {

namespace {

bool valid_id(const std::string& id)
{
    static const std::regex pattern("[A-Za-z0-9_]+");
    return std::regex_match(id, pattern);
}

}  // namespace

Complex::Complex(std::vector<Cell> cells, const std::vector<std::pair<std::string, std::string>>& covers)
    : cells_(std::move(cells))
{
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        const auto& c = cells_[i];
        if (!valid_id(c.id)) throw ParseError("invalid cell id '" + c.id + "'");
        if (c.dim < 0) throw ParseError("negative dimension for cell '" + c.id + "'");
        if (!by_id_.emplace(c.id, i).second) throw ParseError("duplicate cell id '" + c.id + "'");
    }
    std::size_t n = cells_.size();
    facets_.assign(n, {});
    cofacets_.assign(n, {});
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& [u, l] : covers) {
        auto ui = find(u), li = find(l);
        if (!ui) throw ParseError("cover references unknown cell '" + u + "'");
        if (!li) throw ParseError("cover references unknown cell '" + l + "'");
        if (!seen.insert({*ui, *li}).second) continue;
        covers_.emplace_back(*ui, *li);
        facets_[*ui].push_back(*li);
        cofacets_[*li].push_back(*ui);
    }
    reach_.assign(n, std::vector<char>(n, 0));
    for (std::size_t x = 0; x < n; ++x) {
        std::vector<std::size_t> stack(facets_[x].begin(), facets_[x].end());
        while (!stack.empty()) {
            std::size_t y = stack.back();
            stack.pop_back();
            if (reach_[x][y]) continue;
            reach_[x][y] = 1;
            for (std::size_t z : facets_[y]) stack.push_back(z);
        }
    }
}

std::optional<std::size_t> Complex::find(const std::string& id) const
{
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

std::size_t Complex::index(const std::string& id) const
{
    auto i = find(id);
    if (!i) throw ParseError("unknown cell '" + id + "'");
    return *i;
}

int Complex::dimension() const
{
    int d = -1;
    for (const auto& c : cells_) d = std::max(d, c.dim);
    return d;
}

bool Complex::covers_pair(std::size_t x, std::size_t y) const
{
    const auto& f = facets_.at(x);
    return std::find(f.begin(), f.end(), y) != f.end();
}

std::vector<std::size_t> Complex::cells_of_dim(int n) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cells_.size(); ++i)
        if (cells_[i].dim == n) out.push_back(i);
    return out;
}

ValidationReport validate_complex(const Complex& c)
{
    ValidationReport rep;
    for (const auto& [x, y] : c.covers())
        if (c.dim(x) != c.dim(y) + 1)
            rep.add("grading", "cover does not drop dimension by exactly 1", {c.id(x), c.id(y)});

    std::vector<char> on_cycle(c.size(), 0);
    for (std::size_t x = 0; x < c.size(); ++x) {
        if (!c.above(x, x) || on_cycle[x]) continue;
        std::vector<std::string> cyc;
        for (std::size_t y = 0; y < c.size(); ++y)
            if (c.above(x, y) && c.above(y, x)) {
                on_cycle[y] = 1;
                cyc.push_back(c.id(y));
            }
        rep.add("acyclic", "face relation contains a cycle", cyc);
    }

    for (std::size_t x = 0; x < c.size(); ++x) {
        std::map<std::size_t, std::vector<std::size_t>> mids;
        for (std::size_t y : c.facets(x))
            for (std::size_t z : c.facets(y))
                if (c.dim(x) == c.dim(z) + 2) mids[z].push_back(y);
        for (const auto& [z, ys] : mids) {
            std::set<std::size_t> uniq(ys.begin(), ys.end());
            if (uniq.size() == 2) continue;
            std::vector<std::string> w{c.id(x)};
            for (std::size_t y : uniq) w.push_back(c.id(y));
            w.push_back(c.id(z));
            rep.add("diamond", "diamond property: interval has " + std::to_string(uniq.size()) +
                                   " intermediate cells instead of 2", w);
        }
    }

    for (std::size_t x = 0; x < c.size(); ++x) {
        if (c.dim(x) == 0) continue;
        if (c.facets(x).empty()) {
            rep.add("boundary", "cell of positive dimension has no faces", {c.id(x)});
            continue;
        }
        if (c.dim(x) == 1) {
            std::size_t verts = 0;
            for (std::size_t y : c.facets(x))
                if (c.dim(y) == 0) ++verts;
            if (verts != 2) rep.add("edge-vertices", "edge with ≠2 vertex faces", {c.id(x)});
        }
    }
    return rep;
}

namespace {

struct ParityUnionFind {
    std::vector<std::size_t> parent;
    std::vector<int> parity;  // parity relative to parent

    explicit ParityUnionFind(std::size_t n) : parent(n), parity(n, 0)
    {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::pair<std::size_t, int> find(std::size_t a)
    {
        int p = 0;
        std::size_t r = a;
        while (parent[r] != r) {
            p ^= parity[r];
            r = parent[r];
        }
        // path compression
        std::size_t cur = a;
        int cp = p;
        while (parent[cur] != cur) {
            std::size_t next = parent[cur];
            int np = cp ^ parity[cur];
            parent[cur] = r;
            parity[cur] = cp;
            cur = next;
            cp = np;
        }
        return {r, p};
    }
    // Returns false on contradiction.
    bool unite(std::size_t a, std::size_t b, int rel)
    {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) return (pa ^ pb) == rel;
        parent[rb] = ra;
        parity[rb] = pa ^ pb ^ rel;
        return true;
    }
};

}  // namespace

IncidenceSigns assign_incidence_signs(const Complex& c)
{
    IncidenceSigns s;
    std::vector<std::size_t> order(c.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return c.dim(a) < c.dim(b); });
    for (std::size_t x : order) {
        std::vector<std::size_t> faces(c.facets(x).begin(), c.facets(x).end());
        std::sort(faces.begin(), faces.end());
        if (faces.empty()) continue;
        std::map<std::size_t, std::size_t> local;
        for (std::size_t i = 0; i < faces.size(); ++i) local[faces[i]] = i;
        ParityUnionFind uf(faces.size());
        auto fail = [&](const std::string& why) {
            throw SignInconsistency("no consistent incidence signs at cell '" + c.id(x) + "': " + why);
        };
        if (c.dim(x) == 1) {
            std::vector<std::size_t> verts;
            for (std::size_t y : faces)
                if (c.dim(y) == 0) verts.push_back(y);
            if (verts.size() == 2 && !uf.unite(local[verts[0]], local[verts[1]], 1)) fail("edge endpoints");
        } else {
            std::map<std::size_t, std::vector<std::size_t>> mids;
            for (std::size_t y : faces)
                for (std::size_t z : c.facets(y)) mids[z].push_back(y);
            for (const auto& [z, ys] : mids) {
                if (ys.size() != 2) continue;
                int rhs = -(s(ys[0], z) * s(ys[1], z));
                if (rhs == 0) continue;
                if (!uf.unite(local[ys[0]], local[ys[1]], rhs == -1 ? 1 : 0)) fail("diamond through '" + c.id(z) + "'");
            }
        }
        std::map<std::size_t, int> root_sign;
        for (std::size_t i = 0; i < faces.size(); ++i) {
            auto [r, p] = uf.find(i);
            auto it = root_sign.find(r);
            if (it == root_sign.end()) it = root_sign.emplace(r, p ? -1 : 1).first;
            s.sign[{x, faces[i]}] = p ? -it->second : it->second;
        }
    }
    return s;
}

std::vector<std::size_t> degree_positions(const Complex& c)
{
    std::vector<std::size_t> pos(c.size(), 0);
    std::map<int, std::size_t> next;
    for (std::size_t i = 0; i < c.size(); ++i) pos[i] = next[c.dim(i)]++;
    return pos;
}

ChainComplex cellular_chain_complex(const Complex& c, const IncidenceSigns& s, const Ring& ring)
{
    int top = c.dimension();
    std::vector<std::size_t> ranks(top < 0 ? 1 : static_cast<std::size_t>(top) + 1, 0);
    for (const auto& cell : c.cells()) ++ranks[static_cast<std::size_t>(cell.dim)];
    ChainComplex cc(ring, ranks);
    auto pos = degree_positions(c);
    for (const auto& [x, y] : c.covers()) {
        if (c.dim(x) != c.dim(y) + 1) continue;
        cc.boundary[static_cast<std::size_t>(c.dim(x))].add(pos[y], pos[x], ring.normalize(s(x, y)));
    }
    return cc;
}

}  // namespace flowcat
