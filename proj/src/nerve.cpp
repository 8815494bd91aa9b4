#include "flowcat/nerve.hpp"

#include "flowcat/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace flowcat {

std::size_t edge_index(std::size_t n, std::size_t i, std::size_t j)
{
    // n is the simplex dimension, so vertices are 0..n.
    return i * (2 * n - i + 1) / 2 + (j - i - 1);
}

std::size_t SimplicialSetSkeleton::count(std::size_t n, bool nondegenerate_only) const
{
    if (n >= simplices.size()) return 0;
    if (!nondegenerate_only) return simplices[n].size();
    return static_cast<std::size_t>(std::count_if(simplices[n].begin(), simplices[n].end(),
                                                  [](const Simplex& s) { return !s.degenerate; }));
}

bool is_degenerate(const PCategory& cat, const Simplex& s)
{
    if (s.f.empty()) return false;
    std::size_t n = s.dim();
    auto f = [&](std::size_t i, std::size_t j) -> const Mor& { return s.f[edge_index(n, i, j)]; };
    for (std::size_t k = 0; k + 1 <= n; ++k) {
        if (s.objects[k] != s.objects[k + 1]) continue;
        if (!cat.is_identity(f(k, k + 1))) continue;
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) ok = f(i, k) == f(i, k + 1);
        for (std::size_t j = k + 2; j <= n && ok; ++j) ok = f(k, j) == f(k + 1, j);
        if (ok) return true;
    }
    return false;
}

SimplicialSetSkeleton geometric_nerve(const PCategory& cat, std::size_t maxdim)
{
    SimplicialSetSkeleton sk;
    sk.maxdim = maxdim;
    sk.simplices.resize(maxdim + 1);
    std::size_t n_obj = cat.num_objects();
    for (std::size_t x = 0; x < n_obj; ++x) sk.simplices[0].push_back({{x}, {}, false});
    if (maxdim == 0) return sk;
    for (std::size_t x = 0; x < n_obj; ++x)
        for (std::size_t y = 0; y < n_obj; ++y)
            for (const auto& m : cat.morphisms(x, y)) {
                Simplex s{{x, y}, {m}, false};
                s.degenerate = is_degenerate(cat, s);
                sk.simplices[1].push_back(std::move(s));
            }
    for (std::size_t n = 2; n <= maxdim; ++n) {
        for (const auto& base : sk.simplices[n - 1]) {
            std::size_t pn = n - 1;
            for (std::size_t xn = 0; xn < n_obj; ++xn) {
                // new[j] is f_{j,n}; fill from j = n-1 downwards so triangles can be checked early.
                std::vector<Mor> fresh(n);
                std::function<void(std::size_t)> choose = [&](std::size_t jj) {
                    if (jj == 0) {
                        Simplex s;
                        s.objects = base.objects;
                        s.objects.push_back(xn);
                        s.f.resize(n * (n + 1) / 2);
                        for (std::size_t i = 0; i < n; ++i) {
                            for (std::size_t j = i + 1; j < n; ++j)
                                s.f[edge_index(n, i, j)] = base.f[edge_index(pn, i, j)];
                            s.f[edge_index(n, i, n)] = fresh[i];
                        }
                        s.degenerate = is_degenerate(cat, s);
                        sk.simplices[n].push_back(std::move(s));
                        return;
                    }
                    std::size_t j = jj - 1;
                    for (const auto& m : cat.morphisms(base.objects[j], xn)) {
                        bool ok = true;
                        for (std::size_t k = j + 1; k < n && ok; ++k) {
                            auto comp = cat.compose(base.f[edge_index(pn, j, k)], fresh[k]);
                            ok = comp && cat.le(m, *comp);
                        }
                        if (!ok) continue;
                        fresh[j] = m;
                        choose(j);
                    }
                };
                choose(n);
            }
        }
    }
    return sk;
}

SimplicialSetSkeleton order_complex(const HomPoset& p, int maxdim)
{
    std::size_t n = p.size();
    std::size_t limit = maxdim < 0 ? (n == 0 ? 0 : n - 1) : static_cast<std::size_t>(maxdim);
    SimplicialSetSkeleton sk;
    sk.maxdim = limit;
    sk.simplices.resize(limit + 1);
    std::vector<std::size_t> chain;
    std::function<void()> extend = [&]() {
        sk.simplices[chain.size() - 1].push_back({chain, {}, false});
        if (chain.size() - 1 == limit) return;
        for (std::size_t b = 0; b < n; ++b)
            if (b != chain.back() && p.le(chain.back(), b)) {
                chain.push_back(b);
                extend();
                chain.pop_back();
            }
    };
    for (std::size_t a = 0; a < n; ++a) {
        chain = {a};
        extend();
    }
    if (maxdim < 0) {
        while (sk.simplices.size() > 1 && sk.simplices.back().empty()) sk.simplices.pop_back();
        sk.maxdim = sk.simplices.size() - 1;
    }
    return sk;
}

namespace {

std::vector<std::size_t> simplex_key(const Simplex& s)
{
    std::vector<std::size_t> key = s.objects;
    for (const auto& m : s.f) key.push_back(m.idx);
    return key;
}

Simplex face(const Simplex& s, std::size_t drop)
{
    std::size_t n = s.dim();
    Simplex out;
    for (std::size_t i = 0; i <= n; ++i)
        if (i != drop) out.objects.push_back(s.objects[i]);
    if (!s.f.empty())
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j)
                if (i != drop && j != drop) out.f.push_back(s.f[edge_index(n, i, j)]);
    return out;
}

}  // namespace

ChainComplex normalized_chain_complex(const SimplicialSetSkeleton& sk, const Ring& ring)
{
    std::size_t top = sk.simplices.size();
    std::vector<std::map<std::vector<std::size_t>, long>> index(top);
    std::vector<std::size_t> ranks(top, 0);
    for (std::size_t n = 0; n < top; ++n)
        for (const auto& s : sk.simplices[n])
            index[n][simplex_key(s)] = s.degenerate ? -1 : static_cast<long>(ranks[n]++);
    ChainComplex cc(ring, ranks);
    for (std::size_t n = 1; n < top; ++n)
        for (const auto& s : sk.simplices[n]) {
            if (s.degenerate) continue;
            long col = index[n].at(simplex_key(s));
            for (std::size_t i = 0; i <= n; ++i) {
                auto it = index[n - 1].find(simplex_key(face(s, i)));
                if (it == index[n - 1].end()) throw ComputationError("nerve face missing from skeleton");
                if (it->second < 0) continue;
                cc.boundary[n].add(static_cast<std::size_t>(it->second), static_cast<std::size_t>(col),
                                   ring.normalize(i % 2 ? -1 : 1));
            }
        }
    return cc;
}

HomologySummary truncate(const HomologySummary& h, std::size_t degrees)
{
    HomologySummary out = h;
    if (out.degrees.size() > degrees) out.degrees.resize(degrees);
    return out;
}

std::vector<std::size_t> reduced_betti(const HomologySummary& h)
{
    auto b = h.betti();
    if (!b.empty() && b[0] > 0) --b[0];
    return b;
}

HomologySummary nerve_homology(const PCategory& cat, std::size_t maxdim, const Ring& ring)
{
    auto sk = geometric_nerve(cat, maxdim);
    return truncate(homology(normalized_chain_complex(sk, ring)), maxdim);
}

HomologySummary order_complex_homology(const HomPoset& p, const Ring& ring)
{
    auto sk = order_complex(p);
    return homology(normalized_chain_complex(sk, ring));
}

}  // namespace flowcat
