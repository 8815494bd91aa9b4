#include "flowcat/homalg.hpp"

#include "flowcat/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace flowcat {

namespace {

bool is_prime(std::uint64_t p)
{
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p)
{
    unsigned __int128 r = 1, x = b % p;
    while (e) {
        if (e & 1) r = r * x % p;
        x = x * x % p;
        e >>= 1;
    }
    return static_cast<std::uint64_t>(r);
}

std::uint64_t to_fp(const Scalar& v, std::uint64_t p)
{
    mpz_class pz(std::to_string(p));
    mpz_class num = v.get_num() % pz;
    if (num < 0) num += pz;
    mpz_class den = v.get_den() % pz;
    if (den == 0) throw NotInvertible("denominator divisible by the field characteristic");
    std::uint64_t n = std::stoull(num.get_str());
    std::uint64_t d = std::stoull(den.get_str());
    unsigned __int128 r = static_cast<unsigned __int128>(n) * mod_pow(d, p - 2, p) % p;
    return static_cast<std::uint64_t>(r);
}

Scalar from_u64(std::uint64_t v) { return Scalar(mpz_class(std::to_string(v))); }

}  // namespace

Ring Ring::prime_field(std::uint64_t p)
{
    if (!is_prime(p)) throw ParseError("not a prime: " + std::to_string(p));
    if (p >= (1ull << 62)) throw ParseError("prime too large: " + std::to_string(p));
    return {Kind::PrimeField, p};
}

Ring Ring::parse(const std::string& text)
{
    if (text == "Z") return integers();
    if (text == "Q") return rationals();
    if (text.rfind("Fp:", 0) == 0) {
        std::string digits = text.substr(3);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("bad prime field: " + text);
        return prime_field(std::stoull(digits));
    }
    throw ParseError("unknown ring: " + text + " (expected Z, Q or Fp:<p>)");
}

std::string Ring::name() const
{
    switch (kind) {
    case Kind::Integers: return "Z";
    case Kind::Rationals: return "Q";
    case Kind::PrimeField: return "Fp:" + std::to_string(p);
    }
    return "?";
}

Scalar Ring::normalize(const Scalar& v) const
{
    switch (kind) {
    case Kind::Integers:
        if (v.get_den() != 1) throw ParseError("non-integer entry over Z: " + v.get_str());
        return v;
    case Kind::Rationals: return v;
    case Kind::PrimeField: return from_u64(to_fp(v, p));
    }
    return v;
}

bool Ring::is_unit(const Scalar& v) const
{
    switch (kind) {
    case Kind::Integers: return v == 1 || v == -1;
    case Kind::Rationals: return v != 0;
    case Kind::PrimeField: return to_fp(v, p) != 0;
    }
    return false;
}

Scalar Ring::inverse(const Scalar& v) const
{
    if (!is_unit(v)) throw NotInvertible("not a unit over " + name() + ": " + v.get_str());
    if (kind == Kind::PrimeField) return from_u64(mod_pow(to_fp(v, p), p - 2, p));
    Scalar r = 1 / v;
    r.canonicalize();
    return r;
}

void SparseMatrix::add(std::size_t r, std::size_t c, const Scalar& v)
{
    if (v == 0) return;
    auto& col = columns.at(c);
    auto it = col.find(r);
    if (it == col.end()) {
        col.emplace(r, v);
        return;
    }
    it->second += v;
    if (it->second == 0) col.erase(it);
}

Scalar SparseMatrix::at(std::size_t r, std::size_t c) const
{
    auto it = columns.at(c).find(r);
    return it == columns[c].end() ? Scalar(0) : it->second;
}

std::size_t SparseMatrix::nonzeros() const
{
    std::size_t n = 0;
    for (const auto& c : columns) n += c.size();
    return n;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b, const Ring& ring)
{
    if (a.cols != b.rows) throw ComputationError("matrix shape mismatch in product");
    SparseMatrix out(a.rows, b.cols);
    for (std::size_t j = 0; j < b.cols; ++j) {
        for (const auto& [k, bv] : b.columns[j])
            for (const auto& [i, av] : a.columns[k]) out.add(i, j, av * bv);
        if (ring.kind == Ring::Kind::PrimeField) {
            std::map<std::size_t, Scalar> reduced;
            for (const auto& [i, v] : out.columns[j]) {
                Scalar n = ring.normalize(v);
                if (n != 0) reduced.emplace(i, n);
            }
            out.columns[j] = std::move(reduced);
        }
    }
    return out;
}

DenseMatrix DenseMatrix::identity(std::size_t n)
{
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, const Ring& ring)
{
    if (a.cols != b.rows) throw ComputationError("matrix shape mismatch in product");
    DenseMatrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) out(i, j) += a(i, k) * b(k, j);
        }
    for (auto& v : out.data) v = ring.normalize(v);
    return out;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b, const Ring& ring)
{
    if (a.rows != b.rows || a.cols != b.cols) throw ComputationError("matrix shape mismatch in sum");
    DenseMatrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = ring.normalize(a.data[i] + b.data[i]);
    return out;
}

DenseMatrix scale(const DenseMatrix& a, const Scalar& s, const Ring& ring)
{
    DenseMatrix out = a;
    for (auto& v : out.data) v = ring.normalize(v * s);
    return out;
}

DenseMatrix inverse(const DenseMatrix& a, const Ring& ring)
{
    if (a.rows != a.cols) throw NotInvertible("non-square matrix");
    std::size_t n = a.rows;
    // Gauss-Jordan over Q (or Fp); over Z the inverse must come out integral.
    Ring field = ring.kind == Ring::Kind::Integers ? Ring::rationals() : ring;
    DenseMatrix m = a, inv = DenseMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = n;
        for (std::size_t r = c; r < n; ++r)
            if (field.normalize(m(r, c)) != 0) {
                piv = r;
                break;
            }
        if (piv == n) throw NotInvertible("singular matrix over " + ring.name());
        if (piv != c)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(piv, j), m(c, j));
                std::swap(inv(piv, j), inv(c, j));
            }
        Scalar s = field.inverse(m(c, c));
        for (std::size_t j = 0; j < n; ++j) {
            m(c, j) = field.normalize(m(c, j) * s);
            inv(c, j) = field.normalize(inv(c, j) * s);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m(r, c) == 0) continue;
            Scalar f = m(r, c);
            for (std::size_t j = 0; j < n; ++j) {
                m(r, j) = field.normalize(m(r, j) - f * m(c, j));
                inv(r, j) = field.normalize(inv(r, j) - f * inv(c, j));
            }
        }
    }
    if (ring.kind == Ring::Kind::Integers)
        for (const auto& v : inv.data)
            if (v.get_den() != 1) throw NotInvertible("determinant is not a unit over Z");
    return inv;
}

std::string to_string(const DenseMatrix& a)
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < a.rows; ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < a.cols; ++j) os << (j ? "," : "") << a(i, j).get_str();
        os << "]";
    }
    os << "]";
    return os.str();
}

ChainComplex::ChainComplex(Ring r, std::vector<std::size_t> degree_ranks)
    : ring(r), ranks(std::move(degree_ranks))
{
    for (std::size_t n = 0; n < ranks.size(); ++n)
        boundary.emplace_back(n == 0 ? 0 : ranks[n - 1], ranks[n]);
}

int first_square_failure(const ChainComplex& cc)
{
    for (std::size_t n = 1; n + 1 < cc.boundary.size(); ++n)
        if (!multiply(cc.boundary[n], cc.boundary[n + 1], cc.ring).is_zero()) return static_cast<int>(n);
    return -1;
}

namespace {

std::size_t rank_rational(const SparseMatrix& m)
{
    std::vector<std::map<std::size_t, Scalar>> reduced;
    std::map<std::size_t, std::size_t> owner;
    for (const auto& src : m.columns) {
        std::map<std::size_t, Scalar> col = src;
        while (!col.empty()) {
            auto low = std::prev(col.end());
            auto it = owner.find(low->first);
            if (it == owner.end()) break;
            const auto& other = reduced[it->second];
            Scalar f = low->second / other.at(low->first);
            for (const auto& [r, v] : other) {
                auto& slot = col[r];
                slot -= f * v;
                if (slot == 0) col.erase(r);
            }
        }
        if (col.empty()) continue;
        owner[std::prev(col.end())->first] = reduced.size();
        reduced.push_back(std::move(col));
    }
    return reduced.size();
}

std::size_t rank_mod_p(const SparseMatrix& m, std::uint64_t p)
{
    using Col = std::map<std::size_t, std::uint64_t>;
    std::vector<Col> reduced;
    std::map<std::size_t, std::size_t> owner;
    for (const auto& src : m.columns) {
        Col col;
        for (const auto& [r, v] : src) {
            std::uint64_t x = to_fp(v, p);
            if (x) col.emplace(r, x);
        }
        while (!col.empty()) {
            auto low = std::prev(col.end());
            auto it = owner.find(low->first);
            if (it == owner.end()) break;
            const Col& other = reduced[it->second];
            unsigned __int128 f = static_cast<unsigned __int128>(low->second) *
                                  mod_pow(other.at(low->first), p - 2, p) % p;
            for (const auto& [r, v] : other) {
                std::uint64_t sub = static_cast<std::uint64_t>(f * v % p);
                auto& slot = col[r];
                slot = (slot + p - sub) % p;
                if (slot == 0) col.erase(r);
            }
        }
        if (col.empty()) continue;
        owner[std::prev(col.end())->first] = reduced.size();
        reduced.push_back(std::move(col));
    }
    return reduced.size();
}

}  // namespace

std::size_t matrix_rank(const SparseMatrix& m, const Ring& ring)
{
    if (ring.kind == Ring::Kind::PrimeField) return rank_mod_p(m, ring.p);
    return rank_rational(m);
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b)
{
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    IntMatrix out(n, std::vector<mpz_class>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][t] * b[t][j];
        }
    return out;
}

namespace {

IntMatrix identity_int(std::size_t n)
{
    IntMatrix m(n, std::vector<mpz_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

struct SnfState {
    IntMatrix a, u, v;
    bool track;
    std::size_t rows, cols;

    void swap_rows(std::size_t i, std::size_t j)
    {
        if (i == j) return;
        std::swap(a[i], a[j]);
        if (track) std::swap(u[i], u[j]);
    }
    void swap_cols(std::size_t i, std::size_t j)
    {
        if (i == j) return;
        for (auto& row : a) std::swap(row[i], row[j]);
        if (track)
            for (auto& row : v) std::swap(row[i], row[j]);
    }
    // row_i += q * row_j
    void add_row(std::size_t i, std::size_t j, const mpz_class& q)
    {
        for (std::size_t c = 0; c < cols; ++c) a[i][c] += q * a[j][c];
        if (track)
            for (std::size_t c = 0; c < rows; ++c) u[i][c] += q * u[j][c];
    }
    // col_i += q * col_j
    void add_col(std::size_t i, std::size_t j, const mpz_class& q)
    {
        for (std::size_t r = 0; r < rows; ++r) a[r][i] += q * a[r][j];
        if (track)
            for (std::size_t r = 0; r < cols; ++r) v[r][i] += q * v[r][j];
    }
    void negate_row(std::size_t i)
    {
        for (auto& x : a[i]) x = -x;
        if (track)
            for (auto& x : u[i]) x = -x;
    }
};

void smith_in_place(SnfState& s, PivotStrategy strategy)
{
    std::size_t lim = std::min(s.rows, s.cols);
    for (std::size_t t = 0; t < lim; ++t) {
        // Initial pivot per strategy.
        std::size_t pr = s.rows, pc = s.cols;
        for (std::size_t c = t; c < s.cols && (strategy == PivotStrategy::MinAbs || pr == s.rows); ++c)
            for (std::size_t r = t; r < s.rows; ++r) {
                if (s.a[r][c] == 0) continue;
                if (pr == s.rows || abs(s.a[r][c]) < abs(s.a[pr][pc])) {
                    pr = r;
                    pc = c;
                    if (strategy == PivotStrategy::FirstNonzero) break;
                }
            }
        if (pr == s.rows) return;
        s.swap_rows(t, pr);
        s.swap_cols(t, pc);
        for (;;) {
            bool dirty = false;
            for (std::size_t r = t + 1; r < s.rows; ++r) {
                if (s.a[r][t] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), s.a[r][t].get_mpz_t(), s.a[t][t].get_mpz_t());
                s.add_row(r, t, -q);
                if (s.a[r][t] != 0) dirty = true;
            }
            for (std::size_t c = t + 1; c < s.cols; ++c) {
                if (s.a[t][c] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), s.a[t][c].get_mpz_t(), s.a[t][t].get_mpz_t());
                s.add_col(c, t, -q);
                if (s.a[t][c] != 0) dirty = true;
            }
            if (dirty) {
                // Move the smallest remainder in row/column t onto the diagonal.
                std::size_t br = t, bc = t;
                for (std::size_t r = t + 1; r < s.rows; ++r)
                    if (s.a[r][t] != 0 && abs(s.a[r][t]) < abs(s.a[br][bc])) {
                        br = r;
                        bc = t;
                    }
                for (std::size_t c = t + 1; c < s.cols; ++c)
                    if (s.a[t][c] != 0 && abs(s.a[t][c]) < abs(s.a[br][bc])) {
                        br = t;
                        bc = c;
                    }
                s.swap_rows(t, br);
                s.swap_cols(t, bc);
                continue;
            }
            std::size_t bad = s.rows;
            for (std::size_t r = t + 1; r < s.rows && bad == s.rows; ++r)
                for (std::size_t c = t + 1; c < s.cols; ++c)
                    if (s.a[r][c] % s.a[t][t] != 0) {
                        bad = r;
                        break;
                    }
            if (bad == s.rows) break;
            s.add_row(t, bad, 1);
        }
        if (s.a[t][t] < 0) s.negate_row(t);
    }
}

}  // namespace

SmithResult smith_normal_form(const IntMatrix& m, PivotStrategy strategy)
{
    SnfState s;
    s.rows = m.size();
    s.cols = m.empty() ? 0 : m[0].size();
    s.a = m;
    s.track = true;
    s.u = identity_int(s.rows);
    s.v = identity_int(s.cols);
    smith_in_place(s, strategy);
    return {std::move(s.u), std::move(s.a), std::move(s.v)};
}

std::vector<mpz_class> invariant_factors(const SmithResult& r)
{
    std::vector<mpz_class> out;
    std::size_t lim = std::min(r.D.size(), r.D.empty() ? 0 : r.D[0].size());
    for (std::size_t i = 0; i < lim; ++i)
        if (r.D[i][i] != 0) out.push_back(r.D[i][i]);
    return out;
}

std::vector<mpz_class> sparse_invariant_factors(const SparseMatrix& m)
{
    std::vector<std::map<std::size_t, mpz_class>> cols(m.cols);
    std::vector<std::set<std::size_t>> rows(m.rows);
    for (std::size_t c = 0; c < m.cols; ++c)
        for (const auto& [r, v] : m.columns[c]) {
            if (v.get_den() != 1) throw ComputationError("non-integer entry in integer matrix");
            cols[c].emplace(r, v.get_num());
            rows[r].insert(c);
        }
    std::vector<bool> alive(m.cols, true);
    std::size_t units = 0;
    bool progress = true;
    while (progress) {
        progress = false;
        std::vector<std::size_t> order;
        for (std::size_t c = 0; c < m.cols; ++c)
            if (alive[c] && !cols[c].empty()) order.push_back(c);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t x, std::size_t y) { return cols[x].size() < cols[y].size(); });
        for (std::size_t c : order) {
            if (!alive[c]) continue;
            std::size_t pr = m.rows;
            std::size_t best = 0;
            for (const auto& [r, v] : cols[c])
                if ((v == 1 || v == -1) && (pr == m.rows || rows[r].size() < best)) {
                    pr = r;
                    best = rows[r].size();
                }
            if (pr == m.rows) continue;
            mpz_class pv = cols[c].at(pr);
            std::vector<std::size_t> others(rows[pr].begin(), rows[pr].end());
            for (std::size_t j : others) {
                if (j == c) continue;
                mpz_class f = cols[j].at(pr) * pv;
                for (const auto& [r, v] : cols[c]) {
                    auto& slot = cols[j][r];
                    slot -= f * v;
                    if (slot == 0) {
                        cols[j].erase(r);
                        rows[r].erase(j);
                    } else {
                        rows[r].insert(j);
                    }
                }
            }
            for (const auto& [r, v] : cols[c]) rows[r].erase(c);
            cols[c].clear();
            alive[c] = false;
            ++units;
            progress = true;
        }
    }
    std::vector<std::size_t> live_cols, live_rows;
    for (std::size_t c = 0; c < m.cols; ++c)
        if (alive[c] && !cols[c].empty()) live_cols.push_back(c);
    for (std::size_t r = 0; r < m.rows; ++r)
        if (!rows[r].empty()) live_rows.push_back(r);
    std::vector<mpz_class> out(units, mpz_class(1));
    if (live_cols.empty()) return out;
    std::map<std::size_t, std::size_t> row_index;
    for (std::size_t i = 0; i < live_rows.size(); ++i) row_index[live_rows[i]] = i;
    SnfState s;
    s.rows = live_rows.size();
    s.cols = live_cols.size();
    s.track = false;
    s.a.assign(s.rows, std::vector<mpz_class>(s.cols, 0));
    for (std::size_t j = 0; j < live_cols.size(); ++j)
        for (const auto& [r, v] : cols[live_cols[j]]) s.a[row_index.at(r)][j] = v;
    smith_in_place(s, PivotStrategy::MinAbs);
    for (std::size_t i = 0; i < std::min(s.rows, s.cols); ++i)
        if (s.a[i][i] != 0) out.push_back(s.a[i][i]);
    return out;
}

std::vector<std::size_t> HomologySummary::betti() const
{
    std::vector<std::size_t> b;
    for (const auto& d : degrees) b.push_back(d.rank);
    return b;
}

std::string HomologySummary::to_string() const
{
    std::ostringstream os;
    // Trailing zero degrees are dropped; the zero complex prints as "(0)".
    std::size_t shown = degrees.size();
    while (shown > 1 && degrees[shown - 1].rank == 0 && degrees[shown - 1].torsion.empty()) --shown;
    os << "(";
    if (shown == 0) os << "0";
    for (std::size_t n = 0; n < shown; ++n) {
        if (n) os << ", ";
        const auto& d = degrees[n];
        std::vector<std::string> parts;
        std::string base = ring.kind == Ring::Kind::Integers ? "Z"
                           : ring.kind == Ring::Kind::Rationals ? "Q"
                                                                : "F" + std::to_string(ring.p);
        if (d.rank == 1)
            parts.push_back(base);
        else if (d.rank > 1)
            parts.push_back(base + "^" + std::to_string(d.rank));
        for (const auto& t : d.torsion) parts.push_back("Z/" + t.get_str());
        if (parts.empty()) parts.push_back("0");
        for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "+" : "") << parts[i];
    }
    os << ")";
    return os.str();
}

bool HomologySummary::operator==(const HomologySummary& o) const
{
    if (degrees.size() != o.degrees.size()) return false;
    for (std::size_t n = 0; n < degrees.size(); ++n)
        if (degrees[n].rank != o.degrees[n].rank || degrees[n].torsion != o.degrees[n].torsion) return false;
    return true;
}

HomologySummary homology(const ChainComplex& cc)
{
    int bad = first_square_failure(cc);
    if (bad >= 0) throw NotAComplex("d_" + std::to_string(bad) + " o d_" + std::to_string(bad + 1) + " != 0");
    std::size_t top = cc.ranks.size();
    std::vector<std::size_t> rank(top + 1, 0);
    std::vector<std::vector<mpz_class>> torsion(top + 1);
    for (std::size_t n = 1; n < top; ++n) {
        if (cc.ring.kind == Ring::Kind::Integers) {
            auto inv = sparse_invariant_factors(cc.boundary[n]);
            rank[n] = inv.size();
            for (auto& f : inv)
                if (f > 1) torsion[n - 1].push_back(f);
        } else {
            rank[n] = matrix_rank(cc.boundary[n], cc.ring);
        }
    }
    HomologySummary out;
    out.ring = cc.ring;
    for (std::size_t n = 0; n < top; ++n) {
        DegreeHomology d;
        d.rank = cc.ranks[n] - rank[n] - rank[n + 1];
        d.torsion = torsion[n];
        std::sort(d.torsion.begin(), d.torsion.end());
        out.degrees.push_back(std::move(d));
    }
    return out;
}

}  // namespace flowcat
