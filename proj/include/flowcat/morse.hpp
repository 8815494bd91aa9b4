#pragma once

#include "flowcat/cellcx.hpp"
#include "flowcat/pcat.hpp"
#include "flowcat/report.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace flowcat {

enum class MatchingKind { Classical, Generalized };

struct Matching {
    MatchingKind kind = MatchingKind::Classical;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (upper, lower)
};

std::string to_string(MatchingKind k);

// Throws BadPair on a face or codimension violation, or a repeated cell.
ValidationReport check_acyclic(const Complex& c, const Matching& m);
// Critical cells read directly off the matching.
std::vector<std::size_t> matching_critical_cells(const Complex& c, const Matching& m);

struct MorseSystem {
    std::vector<Mor> sigma;
    std::vector<std::vector<char>> rel;          // rel[a][b]: sigma[a] |> sigma[b]
    std::vector<std::size_t> critical;           // objects outside every span
    std::vector<std::vector<std::size_t>> span;  // span[a] for sigma[a]

    std::optional<std::size_t> find(const Mor& f) const;
    // Sigma element with these endpoints, if any.
    std::optional<std::size_t> find(std::size_t src, std::size_t dst) const;
    bool contains(const Mor& f) const { return find(f).has_value(); }
    bool is_critical(std::size_t obj) const;
    std::size_t size() const { return sigma.size(); }
};

// Derives the order relation, spans and critical objects of a set of morphisms.
MorseSystem make_morse_system(const PCategory& cat, std::vector<Mor> sigma);
// Sigma is the atom of hom(upper, lower) for every pair; cat must be built from c.
MorseSystem matching_to_morse_system(const PCategory& cat, const Complex& c, const Matching& m);

ValidationReport validate_morse_system(const PCategory& cat, const MorseSystem& s);

std::vector<std::size_t> restriction_objects(const PCategory& cat, const Mor& f);
PCategory restriction_category(const PCategory& cat, const MorseSystem& s, const Mor& f);

enum class Contractibility { Certified, Acyclic, Fail };
std::string to_string(Contractibility c);

struct MildnessEntry {
    Mor f;
    std::vector<std::size_t> objects;
    bool chain_terminates = true;
    bool finite = true;
    bool loopfree = true;
    Contractibility verdict = Contractibility::Fail;
    std::string reason;

    bool mild() const
    {
        return chain_terminates && finite && loopfree && verdict != Contractibility::Fail;
    }
};

struct MildnessReport {
    std::vector<MildnessEntry> entries;
    bool mild() const;
};

MildnessReport check_mildness(const PCategory& cat, const MorseSystem& s);

// Simplicial collapse of the order complex of a finite poset down to a vertex.
bool collapses_to_point(const HomPoset& p);

}  // namespace flowcat
