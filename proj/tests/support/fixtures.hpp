#pragma once

#include "flowcat/commands.hpp"
#include "flowcat/io.hpp"
#include "flowcat/pcat.hpp"

#include <string>

namespace testfx {

inline std::string text(const std::string& file) { return *flowcat::app::fixture_file(file); }

inline flowcat::Complex complex(const std::string& file) { return flowcat::parse_complex(text(file), file); }

inline flowcat::Matching matching(const flowcat::Complex& c, const std::string& file)
{
    return flowcat::parse_matching(c, text(file), file).matching;
}

inline flowcat::Complex sphere() { return complex("sphere.json"); }
inline flowcat::Complex fig2() { return complex("fig2.json"); }

inline flowcat::Mor mor(const flowcat::PCategory& cat, const std::string& label)
{
    auto cells = flowcat::split_path(label);
    auto x = *cat.find_object(cells.front());
    auto y = *cat.find_object(cells.back());
    if (cells.size() == 1) return cat.identity(x);
    return *cat.find_morphism(x, y, label);
}

}  // namespace testfx
