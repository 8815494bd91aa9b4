#pragma once

#include "flowcat/homalg.hpp"
#include "flowcat/report.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace flowcat {

struct Cell {
    std::string id;
    int dim = 0;
};

// Graded face poset of a finite regular CW complex, given by its codim-1 covers.
class Complex {
public:
    Complex() = default;
    // Throws ParseError on duplicate or unknown ids and on bad ids.
    Complex(std::vector<Cell> cells, const std::vector<std::pair<std::string, std::string>>& covers);

    std::size_t size() const { return cells_.size(); }
    const Cell& cell(std::size_t i) const { return cells_.at(i); }
    const std::vector<Cell>& cells() const { return cells_; }
    std::optional<std::size_t> find(const std::string& id) const;
    std::size_t index(const std::string& id) const;  // throws ParseError
    const std::string& id(std::size_t i) const { return cells_.at(i).id; }
    int dim(std::size_t i) const { return cells_.at(i).dim; }
    int dimension() const;

    // Cover faces of x (x covers y), in input order of the cover list.
    const std::vector<std::size_t>& facets(std::size_t x) const { return facets_.at(x); }
    const std::vector<std::size_t>& cofacets(std::size_t y) const { return cofacets_.at(y); }
    const std::vector<std::pair<std::size_t, std::size_t>>& covers() const { return covers_; }
    bool covers_pair(std::size_t x, std::size_t y) const;

    // Strict face relation x > y (transitive closure of the covers).
    bool above(std::size_t x, std::size_t y) const { return reach_[x][y] != 0; }
    bool at_or_above(std::size_t x, std::size_t y) const { return x == y || above(x, y); }

    // Cells of dimension n in input order.
    std::vector<std::size_t> cells_of_dim(int n) const;

private:
    std::vector<Cell> cells_;
    std::map<std::string, std::size_t> by_id_;
    std::vector<std::pair<std::size_t, std::size_t>> covers_;
    std::vector<std::vector<std::size_t>> facets_;
    std::vector<std::vector<std::size_t>> cofacets_;
    std::vector<std::vector<char>> reach_;
};

ValidationReport validate_complex(const Complex& c);

struct IncidenceSigns {
    std::map<std::pair<std::size_t, std::size_t>, int> sign;

    int operator()(std::size_t x, std::size_t y) const
    {
        auto it = sign.find({x, y});
        return it == sign.end() ? 0 : it->second;
    }
};

// Throws SignInconsistency when the diamond parity constraints cannot be met.
IncidenceSigns assign_incidence_signs(const Complex& c);

// Position of each cell inside the basis of its degree.
std::vector<std::size_t> degree_positions(const Complex& c);

ChainComplex cellular_chain_complex(const Complex& c, const IncidenceSigns& s, const Ring& ring);

}  // namespace flowcat
