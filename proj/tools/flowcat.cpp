#include "flowcat/commands.hpp"
#include "flowcat/errors.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace flowcat;

namespace {

// Reads a file from disk, falling back to a bundled fixture of the same name.
std::string load(const std::string& path)
{
    if (std::filesystem::exists(path)) return read_file(path);
    if (auto text = app::fixture_file(path)) return *text;
    throw ParseError(path + ": cannot open file");
}

int emit(const app::Report& r, const std::string& format)
{
    if (format == "json")
        std::cout << r.json.dump(2) << "\n";
    else
        std::cout << app::render_text(r);
    return r.exit_code;
}

app::Report input_error(const std::string& command, const std::string& message)
{
    app::Report r;
    r.json = {{"command", command}, {"results", {{"error", {{"kind", "input"}, {"message", message}}}}},
              {"warnings", nlohmann::json::array()}};
    r.exit_code = app::exit_invalid;
    return r;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App cli{"Discrete Morse theory through localized entrance path categories"};
    cli.require_subcommand(1);
    std::string format = "text";
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    };

    std::string complex_path, matching_path, cosheaf_path;

    auto* validate = cli.add_subcommand("validate", "Check a complex and optionally a matching");
    validate->add_option("complex", complex_path, "Complex JSON file")->required();
    validate->add_option("matching", matching_path, "Matching JSON file");
    add_format(validate);

    app::FlowOptions flow_opt;
    std::string from, to, category;
    auto* flow = cli.add_subcommand("flow", "List the localized hom-posets of the discrete flow category");
    flow->add_option("complex", complex_path, "Complex JSON file")->required();
    flow->add_option("matching", matching_path, "Matching JSON file")->required();
    flow->add_option("--from", from, "Source critical cell");
    flow->add_option("--to", to, "Target critical cell");
    flow->add_option("--max-zigzag-len", flow_opt.max_zigzag_len, "Backward-arrow bound for generalized matchings")
        ->capture_default_str();
    flow->add_option("--category", category, "Category to localize")
        ->check(CLI::IsMember({"entrance", "face-poset"}));
    add_format(flow);

    app::HomologyOptions hom_opt;
    std::string coefficients;
    std::string kind;
    auto* homology = cli.add_subcommand("homology", "Compute homology");
    homology->require_subcommand(1);
    struct Kind {
        const char* name;
        const char* help;
        bool matching;
        bool cosheaf;
    };
    for (const Kind& k : {Kind{"complex", "Cellular homology", false, false},
                          Kind{"nerve-en", "Homology of the nerve of the entrance path category", false, false},
                          Kind{"nerve-flow", "Homology of the nerve of the discrete flow category", true, false},
                          Kind{"cosheaf", "Cosheaf homology", false, true},
                          Kind{"morse", "Homology of the Morse-compressed chain complex", true, true}}) {
        auto* sub = homology->add_subcommand(k.name, k.help);
        sub->add_option("complex", complex_path, "Complex JSON file")->required();
        if (k.matching) sub->add_option("matching", matching_path, "Matching JSON file")->required();
        if (k.cosheaf)
            sub->add_option("cosheaf", cosheaf_path, k.matching ? "Cosheaf JSON file (constant if omitted)"
                                                                 : "Cosheaf JSON file")
                ->required(!k.matching);
        sub->add_option("--coefficients", coefficients, "Z, Q or Fp:<p>");
        sub->add_option("--max-nerve-dim", hom_opt.max_nerve_dim, "Nerve truncation dimension")->capture_default_str();
        sub->add_option("--max-zigzag-len", hom_opt.max_zigzag_len, "Starting bound for stabilization")
            ->capture_default_str();
        sub->add_option("--category", category, "Category to localize")
            ->check(CLI::IsMember({"entrance", "face-poset"}));
        add_format(sub);
        sub->callback([&kind, name = std::string(k.name)] { kind = name; });
    }

    std::string fixture_name;
    auto* fixture = cli.add_subcommand("fixture", "Bundled fixtures");
    fixture->require_subcommand(1);
    auto* fixture_list = fixture->add_subcommand("list", "List bundled fixtures");
    add_format(fixture_list);
    auto* fixture_run = fixture->add_subcommand("run", "Recompute a fixture's expected results");
    fixture_run->add_option("name", fixture_name, "Fixture name")->required();
    add_format(fixture_run);

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        cli.exit(e);
        return app::exit_invalid;
    }

    std::string command = validate->parsed() ? "validate" : flow->parsed() ? "flow" : homology->parsed() ? "homology" : "fixture";
    app::Inputs in;
    try {
        if (!complex_path.empty()) {
            in.complex_text = load(complex_path);
            in.complex_source = complex_path;
        }
        if (!matching_path.empty()) {
            in.matching_text = load(matching_path);
            in.matching_source = matching_path;
        }
        if (!cosheaf_path.empty()) {
            in.cosheaf_text = load(cosheaf_path);
            in.cosheaf_source = cosheaf_path;
        }
    } catch (const Error& e) {
        return emit(input_error(command, e.what()), format);
    }
    if (!category.empty()) flow_opt.category = hom_opt.category = category;
    if (!coefficients.empty()) hom_opt.coefficients = coefficients;
    if (!from.empty()) flow_opt.from = from;
    if (!to.empty()) flow_opt.to = to;

    if (validate->parsed()) return emit(app::cmd_validate(in), format);
    if (flow->parsed()) return emit(app::cmd_flow(in, flow_opt), format);
    if (homology->parsed()) return emit(app::cmd_homology(in, kind, hom_opt), format);
    if (fixture_list->parsed()) return emit(app::cmd_fixture_list(), format);
    return emit(app::cmd_fixture_run(fixture_name), format);
}
