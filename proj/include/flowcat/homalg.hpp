#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace flowcat {

using Scalar = mpq_class;

struct Ring {
    enum class Kind { Integers, Rationals, PrimeField };
    Kind kind = Kind::Integers;
    std::uint64_t p = 0;

    static Ring integers() { return {Kind::Integers, 0}; }
    static Ring rationals() { return {Kind::Rationals, 0}; }
    static Ring prime_field(std::uint64_t p);
    // Accepts "Z", "Q" or "Fp:<p>".
    static Ring parse(const std::string& text);

    std::string name() const;
    bool is_field() const { return kind != Kind::Integers; }

    // Canonical representative: Fp values land in [0, p); Z rejects fractions.
    Scalar normalize(const Scalar& v) const;
    bool is_unit(const Scalar& v) const;
    Scalar inverse(const Scalar& v) const;

    bool operator==(const Ring& o) const { return kind == o.kind && p == o.p; }
};

// Column-major sparse matrix with exact entries; zero entries are never stored.
struct SparseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::map<std::size_t, Scalar>> columns;

    SparseMatrix() = default;
    SparseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), columns(c) {}

    void add(std::size_t r, std::size_t c, const Scalar& v);
    Scalar at(std::size_t r, std::size_t c) const;
    std::size_t nonzeros() const;
    bool is_zero() const { return nonzeros() == 0; }
};

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b, const Ring& ring);

// Dense matrix used for stalk maps and small exact computations.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Scalar> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
    static DenseMatrix identity(std::size_t n);

    Scalar& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const Scalar& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    bool operator==(const DenseMatrix& o) const
    {
        return rows == o.rows && cols == o.cols && data == o.data;
    }
    bool operator!=(const DenseMatrix& o) const { return !(*this == o); }
};

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, const Ring& ring);
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b, const Ring& ring);
DenseMatrix scale(const DenseMatrix& a, const Scalar& s, const Ring& ring);
// Throws NotInvertible when the matrix is not invertible over the ring.
DenseMatrix inverse(const DenseMatrix& a, const Ring& ring);
std::string to_string(const DenseMatrix& a);

struct ChainComplex {
    Ring ring = Ring::integers();
    std::vector<std::size_t> ranks;
    // boundary[n] maps degree n to degree n-1; boundary[0] has zero rows.
    std::vector<SparseMatrix> boundary;

    ChainComplex() = default;
    ChainComplex(Ring r, std::vector<std::size_t> degree_ranks);
    std::size_t top_degree() const { return ranks.empty() ? 0 : ranks.size() - 1; }
};

// Returns the first degree n with d_n d_{n+1} != 0, or -1.
int first_square_failure(const ChainComplex& cc);

struct DegreeHomology {
    std::size_t rank = 0;
    std::vector<mpz_class> torsion;
};

struct HomologySummary {
    Ring ring = Ring::integers();
    std::vector<DegreeHomology> degrees;

    std::vector<std::size_t> betti() const;
    std::string to_string() const;
    bool operator==(const HomologySummary& o) const;
};

HomologySummary homology(const ChainComplex& cc);

// Rank over a field (Q or Fp); over Z returns the rank over Q.
std::size_t matrix_rank(const SparseMatrix& m, const Ring& ring);

using IntMatrix = std::vector<std::vector<mpz_class>>;

enum class PivotStrategy { MinAbs, FirstNonzero };

struct SmithResult {
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;
};

// U * M * V = D with U, V unimodular and D diagonal in divisibility order.
SmithResult smith_normal_form(const IntMatrix& m, PivotStrategy strategy = PivotStrategy::MinAbs);
std::vector<mpz_class> invariant_factors(const SmithResult& r);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);

// Nonzero invariant factors of an integer sparse matrix.
std::vector<mpz_class> sparse_invariant_factors(const SparseMatrix& m);

}  // namespace flowcat
