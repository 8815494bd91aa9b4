#pragma once

#include "flowcat/io.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace flowcat::app {

// Exit codes shared by the CLI and the Python bindings.
constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_computation = 2;

struct Inputs {
    std::string complex_text;
    std::string complex_source = "<complex>";
    std::optional<std::string> matching_text;
    std::string matching_source = "<matching>";
    std::optional<std::string> cosheaf_text;
    std::string cosheaf_source = "<cosheaf>";
};

struct Report {
    nlohmann::json json;  // {"command", "results", "warnings"}
    int exit_code = exit_ok;
};

struct FlowOptions {
    std::optional<std::string> from;
    std::optional<std::string> to;
    int max_zigzag_len = 4;
    std::optional<std::string> category;  // overrides the matching file
};

struct HomologyOptions {
    std::optional<std::string> coefficients;  // Z unless a cosheaf file sets the ring
    int max_nerve_dim = 3;
    int max_zigzag_len = 4;
    std::optional<std::string> category;
};

inline constexpr int stabilization_cap = 8;

Report cmd_validate(const Inputs& in);
Report cmd_flow(const Inputs& in, const FlowOptions& opt);
// kind: complex, nerve-en, nerve-flow, cosheaf or morse.
Report cmd_homology(const Inputs& in, const std::string& kind, const HomologyOptions& opt);
Report cmd_fixture_list();
Report cmd_fixture_run(const std::string& name);

std::string render_text(const Report& r);

// Embedded fixture files by file name, e.g. "sphere.json".
const std::vector<std::string>& fixture_files();
std::optional<std::string> fixture_file(const std::string& name);

}  // namespace flowcat::app
