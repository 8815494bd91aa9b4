#pragma once

#include "flowcat/cellcx.hpp"
#include "flowcat/cosheaf.hpp"
#include "flowcat/morse.hpp"

#include <string>

namespace flowcat {

struct MatchingInput {
    Matching matching;
    std::string category = "entrance";  // "entrance" or "face-poset"
};

// All parsers throw ParseError naming the source, the JSON line/column for syntax
// errors, and the field path for structural ones.
Complex parse_complex(const std::string& text, const std::string& source = "<complex>");
MatchingInput parse_matching(const Complex& c, const std::string& text, const std::string& source = "<matching>");
Cosheaf parse_cosheaf(const Complex& c, const std::string& text, const std::string& source = "<cosheaf>");

std::string complex_to_json(const Complex& c);
std::string matching_to_json(const Complex& c, const Matching& m);

std::string read_file(const std::string& path);

}  // namespace flowcat
