#pragma once

#include "flowcat/homalg.hpp"
#include "flowcat/pcat.hpp"

#include <cstddef>
#include <vector>

namespace flowcat {

// An n-simplex: objects x_0..x_n and morphisms f_ij (i < j) listed row by row,
// i.e. (0,1), (0,2), ..., (0,n), (1,2), ..., (n-1,n). Order complexes leave f empty.
struct Simplex {
    std::vector<std::size_t> objects;
    std::vector<Mor> f;
    bool degenerate = false;

    std::size_t dim() const { return objects.size() - 1; }
};

std::size_t edge_index(std::size_t n, std::size_t i, std::size_t j);

struct SimplicialSetSkeleton {
    std::size_t maxdim = 0;
    std::vector<std::vector<Simplex>> simplices;  // by dimension

    std::size_t count(std::size_t n, bool nondegenerate_only = true) const;
};

SimplicialSetSkeleton geometric_nerve(const PCategory& cat, std::size_t maxdim);
// Strict chains a_0 => a_1 => ... of the poset, up to maxdim (all chains when maxdim < 0).
SimplicialSetSkeleton order_complex(const HomPoset& p, int maxdim = -1);

bool is_degenerate(const PCategory& cat, const Simplex& s);

ChainComplex normalized_chain_complex(const SimplicialSetSkeleton& sk, const Ring& ring);

// Homology in degrees below maxdim, where the truncated complex is exact.
HomologySummary nerve_homology(const PCategory& cat, std::size_t maxdim, const Ring& ring);
HomologySummary order_complex_homology(const HomPoset& p, const Ring& ring);

HomologySummary truncate(const HomologySummary& h, std::size_t degrees);
// Reduced Betti numbers: degree 0 loses one (when nonempty).
std::vector<std::size_t> reduced_betti(const HomologySummary& h);

}  // namespace flowcat
