#pragma once

#include "flowcat/cellcx.hpp"
#include "flowcat/homalg.hpp"
#include "flowcat/morse.hpp"
#include "flowcat/report.hpp"
#include "flowcat/zigloc.hpp"

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace flowcat {

// Stalk ranks per cell and extension matrices on covers; F(x>y) maps stalk(x) (columns)
// to stalk(y) (rows).
struct Cosheaf {
    Ring ring = Ring::integers();
    std::vector<std::size_t> stalk;
    std::map<std::pair<std::size_t, std::size_t>, DenseMatrix> maps;

    static Cosheaf constant(const Complex& c, const Ring& ring, std::size_t rank = 1);
};

ValidationReport validate_cosheaf(const Complex& c, const Cosheaf& F);

// F(x>z) along a saturated chain of covers; identity when x == z.
DenseMatrix extension(const Complex& c, const Cosheaf& F, std::size_t x, std::size_t z);

ChainComplex cosheaf_chain_complex(const Complex& c, const IncidenceSigns& signs, const Cosheaf& F);
// Throws NotAComplex if the assembled boundary does not square to zero.
HomologySummary cosheaf_homology(const Complex& c, const IncidenceSigns& signs, const Cosheaf& F);

// stalk(source) -> stalk(target) along a zigzag of the entrance path category of c.
// Backward arrows must be matched pairs and use the inverse extension.
DenseMatrix transport(const Complex& c, const Cosheaf& F, const Matching& m, const Zigzag& z);

struct MorseComplex {
    ChainComplex complex;
    std::vector<std::vector<std::size_t>> generators;  // critical cells per degree
};

// Classical matchings only; throws BadPair for generalized ones and NotInvertible for
// singular matched extensions.
MorseComplex morse_chain_complex(const Complex& c, const IncidenceSigns& signs, const Cosheaf& F,
                                 const Matching& m);

}  // namespace flowcat
