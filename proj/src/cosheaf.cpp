#include "flowcat/cosheaf.hpp"

#include "flowcat/errors.hpp"

#include <functional>

namespace flowcat {

Cosheaf Cosheaf::constant(const Complex& c, const Ring& ring, std::size_t rank)
{
    Cosheaf F;
    F.ring = ring;
    F.stalk.assign(c.size(), rank);
    for (const auto& cover : c.covers()) F.maps[cover] = DenseMatrix::identity(rank);
    return F;
}

namespace {

std::string cover_text(const Complex& c, std::size_t x, std::size_t y) { return c.id(x) + ">" + c.id(y); }

const DenseMatrix& cover_map(const Complex& c, const Cosheaf& F, std::size_t x, std::size_t y)
{
    auto it = F.maps.find({x, y});
    if (it == F.maps.end()) throw ComputationError("cosheaf has no map on " + cover_text(c, x, y));
    return it->second;
}

DenseMatrix checked_inverse(const Complex& c, const Cosheaf& F, std::size_t x, std::size_t y)
{
    try {
        return inverse(extension(c, F, x, y), F.ring);
    } catch (const NotInvertible&) {
        throw NotInvertible("extension map " + cover_text(c, x, y) + " is not invertible over " + F.ring.name());
    }
}

}  // namespace

ValidationReport validate_cosheaf(const Complex& c, const Cosheaf& F)
{
    ValidationReport report;
    if (F.stalk.size() != c.size()) {
        report.add("stalks", "cosheaf has " + std::to_string(F.stalk.size()) + " stalks for " +
                                 std::to_string(c.size()) + " cells");
        return report;
    }
    bool shapes_ok = true;
    for (const auto& [key, mat] : F.maps) {
        auto [x, y] = key;
        if (x >= c.size() || y >= c.size() || !c.covers_pair(x, y)) {
            report.add("maps", "map given on a pair that is not a cover");
            shapes_ok = false;
            continue;
        }
        if (mat.rows != F.stalk[y] || mat.cols != F.stalk[x]) {
            report.add("maps",
                       "map " + cover_text(c, x, y) + " is " + std::to_string(mat.rows) + "x" +
                           std::to_string(mat.cols) + ", expected " + std::to_string(F.stalk[y]) + "x" +
                           std::to_string(F.stalk[x]),
                       {c.id(x), c.id(y)});
            shapes_ok = false;
        }
        for (const auto& v : mat.data)
            if (F.ring.kind == Ring::Kind::Integers ? v.get_den() != 1 : F.ring.normalize(v) != v) {
                report.add("maps", "map " + cover_text(c, x, y) + " has an entry outside " + F.ring.name(),
                           {c.id(x), c.id(y)});
                shapes_ok = false;
                break;
            }
    }
    for (const auto& [x, y] : c.covers())
        if (!F.maps.count({x, y})) {
            report.add("maps", "missing map on " + cover_text(c, x, y), {c.id(x), c.id(y)});
            shapes_ok = false;
        }
    if (!shapes_ok) return report;
    for (std::size_t x = 0; x < c.size(); ++x) {
        const auto& fx = c.facets(x);
        for (std::size_t a = 0; a < fx.size(); ++a)
            for (std::size_t b = a + 1; b < fx.size(); ++b)
                for (std::size_t z : c.facets(fx[a])) {
                    if (!c.covers_pair(fx[b], z)) continue;
                    auto left = multiply(F.maps.at({fx[a], z}), F.maps.at({x, fx[a]}), F.ring);
                    auto right = multiply(F.maps.at({fx[b], z}), F.maps.at({x, fx[b]}), F.ring);
                    if (left != right)
                        report.add("functoriality",
                                   "diamond " + c.id(x) + " > {" + c.id(fx[a]) + ", " + c.id(fx[b]) + "} > " +
                                       c.id(z) + " does not commute",
                                   {c.id(x), c.id(fx[a]), c.id(fx[b]), c.id(z)});
                }
    }
    return report;
}

DenseMatrix extension(const Complex& c, const Cosheaf& F, std::size_t x, std::size_t z)
{
    if (x == z) return DenseMatrix::identity(F.stalk.at(x));
    if (!c.above(x, z)) throw ComputationError(c.id(x) + " is not above " + c.id(z));
    DenseMatrix acc = DenseMatrix::identity(F.stalk.at(x));
    std::size_t cur = x;
    while (cur != z) {
        std::size_t next = cur;
        for (std::size_t y : c.facets(cur))
            if (c.at_or_above(y, z)) {
                next = y;
                break;
            }
        acc = multiply(cover_map(c, F, cur, next), acc, F.ring);
        cur = next;
    }
    return acc;
}

namespace {

// Offset of each cell inside the direct sum of stalks of its dimension.
std::vector<std::size_t> stalk_offsets(const Complex& c, const Cosheaf& F, std::vector<std::size_t>& ranks)
{
    std::vector<std::size_t> offset(c.size(), 0);
    ranks.assign(static_cast<std::size_t>(std::max(c.dimension(), 0)) + 1, 0);
    for (std::size_t x = 0; x < c.size(); ++x) {
        auto d = static_cast<std::size_t>(c.dim(x));
        offset[x] = ranks[d];
        ranks[d] += F.stalk[x];
    }
    return offset;
}

void add_block(SparseMatrix& m, std::size_t r0, std::size_t c0, const DenseMatrix& block, const Ring& ring)
{
    for (std::size_t r = 0; r < block.rows; ++r)
        for (std::size_t k = 0; k < block.cols; ++k)
            if (block(r, k) != 0) m.add(r0 + r, c0 + k, ring.normalize(block(r, k)));
}

void require_complex(const ChainComplex& cc, const std::string& what)
{
    int bad = first_square_failure(cc);
    if (bad >= 0)
        throw NotAComplex(what + ": d_" + std::to_string(bad) + " d_" + std::to_string(bad + 1) + " != 0");
}

}  // namespace

ChainComplex cosheaf_chain_complex(const Complex& c, const IncidenceSigns& signs, const Cosheaf& F)
{
    std::vector<std::size_t> ranks;
    auto offset = stalk_offsets(c, F, ranks);
    ChainComplex cc(F.ring, ranks);
    for (const auto& [x, y] : c.covers()) {
        auto block = scale(cover_map(c, F, x, y), signs(x, y), F.ring);
        add_block(cc.boundary[static_cast<std::size_t>(c.dim(x))], offset[y], offset[x], block, F.ring);
    }
    return cc;
}

HomologySummary cosheaf_homology(const Complex& c, const IncidenceSigns& signs, const Cosheaf& F)
{
    auto cc = cosheaf_chain_complex(c, signs, F);
    require_complex(cc, "cosheaf chain complex");
    return homology(cc);
}

DenseMatrix transport(const Complex& c, const Cosheaf& F, const Matching& m, const Zigzag& z)
{
    auto matched = [&](std::size_t upper, std::size_t lower) {
        for (const auto& p : m.pairs)
            if (p.first == upper && p.second == lower) return true;
        return false;
    };
    DenseMatrix acc = DenseMatrix::identity(F.stalk.at(z.source));
    for (std::size_t i = 0; i < z.forward.size(); ++i) {
        const Mor& g = z.forward[i];
        acc = multiply(extension(c, F, g.src, g.dst), acc, F.ring);
        if (i < z.backward.size()) {
            const Mor& f = z.backward[i];
            if (f.src == f.dst) continue;
            if (!matched(f.src, f.dst))
                throw BadPair("backward arrow " + cover_text(c, f.src, f.dst) + " is not a matched pair");
            acc = multiply(checked_inverse(c, F, f.src, f.dst), acc, F.ring);
        }
    }
    return acc;
}

MorseComplex morse_chain_complex(const Complex& c, const IncidenceSigns& signs, const Cosheaf& F, const Matching& m)
{
    if (m.kind != MatchingKind::Classical)
        throw BadPair("the Morse chain complex needs a classical matching");
    auto acyclic = check_acyclic(c, m);
    if (!acyclic.ok()) throw BadPair("matching is not acyclic: " + acyclic.issues.front().message);

    std::vector<long> up(c.size(), -1);
    std::vector<char> upper(c.size(), 0);
    for (const auto& [u, l] : m.pairs) {
        up[l] = static_cast<long>(u);
        upper[u] = 1;
    }
    auto critical = matching_critical_cells(c, m);
    std::vector<char> is_critical(c.size(), 0);
    for (std::size_t x : critical) is_critical[x] = 1;

    MorseComplex out;
    std::size_t top = static_cast<std::size_t>(std::max(c.dimension(), 0));
    out.generators.assign(top + 1, {});
    std::vector<std::size_t> ranks(top + 1, 0), offset(c.size(), 0);
    for (std::size_t x = 0; x < c.size(); ++x)
        if (is_critical[x]) {
            auto d = static_cast<std::size_t>(c.dim(x));
            out.generators[d].push_back(x);
            offset[x] = ranks[d];
            ranks[d] += F.stalk[x];
        }
    out.complex = ChainComplex(F.ring, ranks);

    for (std::size_t n = 1; n <= top; ++n)
        for (std::size_t target : out.generators[n - 1]) {
            std::map<std::size_t, DenseMatrix> memo;
            std::function<DenseMatrix(std::size_t)> T = [&](std::size_t y) -> DenseMatrix {
                if (y == target) return DenseMatrix::identity(F.stalk[y]);
                auto it = memo.find(y);
                if (it != memo.end()) return it->second;
                DenseMatrix acc(F.stalk[target], F.stalk[y]);
                if (!is_critical[y] && !upper[y] && up[y] >= 0) {
                    auto u = static_cast<std::size_t>(up[y]);
                    auto back = checked_inverse(c, F, u, y);
                    for (std::size_t y2 : c.facets(u)) {
                        if (y2 == y) continue;
                        int coef = -signs(u, y) * signs(u, y2);
                        auto step = multiply(cover_map(c, F, u, y2), back, F.ring);
                        acc = add(acc, scale(multiply(T(y2), step, F.ring), coef, F.ring), F.ring);
                    }
                }
                memo.emplace(y, acc);
                return acc;
            };
            for (std::size_t source : out.generators[n])
                for (std::size_t y : c.facets(source)) {
                    auto block = scale(multiply(T(y), cover_map(c, F, source, y), F.ring), signs(source, y), F.ring);
                    add_block(out.complex.boundary[n], offset[target], offset[source], block, F.ring);
                }
        }
    require_complex(out.complex, "Morse chain complex");
    return out;
}

}  // namespace flowcat
