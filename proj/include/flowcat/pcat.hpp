#pragma once

#include "flowcat/cellcx.hpp"
#include "flowcat/report.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace flowcat {

// A morphism is addressed by its endpoints and its position inside hom(src, dst).
struct Mor {
    std::size_t src = 0;
    std::size_t dst = 0;
    std::size_t idx = 0;

    bool operator==(const Mor& o) const { return src == o.src && dst == o.dst && idx == o.idx; }
    bool operator!=(const Mor& o) const { return !(*this == o); }
    bool operator<(const Mor& o) const
    {
        if (src != o.src) return src < o.src;
        if (dst != o.dst) return dst < o.dst;
        return idx < o.idx;
    }
};

// Finite poset given extensionally; leq[a][b] means a => b.
struct HomPoset {
    std::vector<std::string> labels;
    std::vector<std::vector<char>> leq;

    std::size_t size() const { return labels.size(); }
    bool empty() const { return labels.empty(); }
    bool le(std::size_t a, std::size_t b) const { return leq[a][b] != 0; }
    std::optional<std::size_t> find(const std::string& label) const;
    // Pairs (a, b) with a => b, a != b, and nothing strictly between.
    std::vector<std::pair<std::size_t, std::size_t>> cover_relations() const;
    std::optional<std::size_t> minimum() const;
    std::optional<std::size_t> maximum() const;
};

// Reflexive-transitive closure of a relation given as an adjacency matrix.
std::vector<std::vector<char>> transitive_closure(std::vector<std::vector<char>> rel);

// Finite category enriched in posets, stored extensionally.
// Composition is written in diagrammatic order: compose(f, g) is f followed by g.
class PCategory {
public:
    static constexpr std::int32_t undefined = -1;

    PCategory() = default;
    explicit PCategory(std::vector<std::string> objects);

    std::size_t num_objects() const { return objects_.size(); }
    const std::string& object(std::size_t i) const { return objects_.at(i); }
    const std::vector<std::string>& objects() const { return objects_; }
    std::optional<std::size_t> find_object(const std::string& id) const;

    const HomPoset& hom(std::size_t x, std::size_t y) const { return homs_[x * objects_.size() + y]; }
    void set_hom(std::size_t x, std::size_t y, HomPoset h);

    Mor identity(std::size_t x) const { return {x, x, identity_.at(x)}; }
    void set_identity(std::size_t x, std::size_t idx) { identity_.at(x) = idx; }
    bool is_identity(const Mor& f) const { return f.src == f.dst && identity_.at(f.src) == f.idx; }

    // Sets composite for f: x->y and g: y->z; pass undefined for a truncated composite.
    void set_compose(const Mor& f, const Mor& g, std::int32_t result_idx);
    std::optional<Mor> compose(const Mor& f, const Mor& g) const;
    // Composite of f then g, throwing if undefined.
    Mor compose_total(const Mor& f, const Mor& g) const;

    bool le(const Mor& a, const Mor& b) const { return a.src == b.src && a.dst == b.dst && hom(a.src, a.dst).le(a.idx, b.idx); }
    const std::string& label(const Mor& f) const { return hom(f.src, f.dst).labels.at(f.idx); }
    std::optional<Mor> find_morphism(std::size_t x, std::size_t y, const std::string& label) const;
    std::vector<Mor> morphisms(std::size_t x, std::size_t y) const;
    std::size_t total_morphisms() const;

private:
    std::vector<std::int32_t>& table(std::size_t x, std::size_t y, std::size_t z);
    const std::vector<std::int32_t>* table_if(std::size_t x, std::size_t y, std::size_t z) const;

    std::vector<std::string> objects_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::vector<HomPoset> homs_;
    std::vector<std::size_t> identity_;
    std::unordered_map<std::uint64_t, std::vector<std::int32_t>> compose_;
};

// Checks identities, associativity, monotonicity and that every hom is a partial order.
ValidationReport check_pcategory(const PCategory& cat);

// One morphism per face relation x >= y, trivial orders; objects follow cell order.
PCategory face_poset_category(const Complex& c);
// Strictly descending cell sequences ordered by subsequence; objects follow cell order.
PCategory entrance_path_category(const Complex& c);
// A finite poset viewed as a category with a morphism a -> b iff a => b.
PCategory poset_category(const HomPoset& p);
PCategory full_subcategory(const PCategory& cat, const std::vector<std::size_t>& objects);

// Cells along an entrance path label such as "t>x>w".
std::vector<std::string> split_path(const std::string& label);

// Returns none for an empty hom; throws NoAtom if no element meets the atom conditions.
std::optional<Mor> atom(const PCategory& cat, std::size_t x, std::size_t y);
bool is_atom(const PCategory& cat, const Mor& f);
bool is_cellular(const PCategory& cat);

enum class Extremal { Maximal, Minimal };
struct ExtremalObject {
    std::size_t object;
    Extremal kind;
};
std::optional<ExtremalObject> find_homotopy_extremal(const PCategory& cat);

}  // namespace flowcat
