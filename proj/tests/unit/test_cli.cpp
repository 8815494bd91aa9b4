#include "flowcat/commands.hpp"

#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args)
{
    std::string cmd = std::string(FLOWCAT_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

json run_json(const std::string& args, int expect_code = 0)
{
    auto r = run(args + " --format json");
    CHECK_MESSAGE(r.code == expect_code, r.out);
    return json::parse(r.out);
}

std::string temp_file(const std::string& name, const std::string& text)
{
    auto dir = std::filesystem::temp_directory_path() / "flowcat-cli-tests";
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream(path) << text;
    return path.string();
}

}  // namespace

TEST_SUITE("cli")
{
    TEST_CASE("validate: sphere with the classical matching passes")
    {
        auto j = run_json("validate sphere.json matching61.json");
        CHECK(j["command"] == "validate");
        CHECK(j["results"]["ok"] == true);
        CHECK(j["results"]["morse_system"]["critical"] == json({"w", "t"}));
        CHECK(j["results"]["mildness"]["ok"] == true);
    }

    TEST_CASE("validate: complex only")
    {
        auto j = run_json("validate sphere.json");
        CHECK(j["results"]["ok"] == true);
        CHECK_FALSE(j["results"].contains("matching"));
        auto text = run("validate sphere.json");
        CHECK(text.code == 0);
        CHECK(text.out.find("complex:") != std::string::npos);
    }

    TEST_CASE("validate: cyclic matching exits 1 with a witness cycle")
    {
        auto j = run_json("validate triangle.json triangle-cycle-matching.json", 1);
        const auto& issues = j["results"]["matching"]["acyclic"]["issues"];
        REQUIRE(issues.size() == 1);
        CHECK(issues[0]["witness"].size() == 4);
    }

    TEST_CASE("flow: sphere hom(t, w) has 8 classes and 8 covers")
    {
        auto j = run_json("flow sphere.json matching61.json --from t --to w");
        const auto& h = j["results"]["homs"][0];
        CHECK(h["classes"].size() == 8);
        CHECK(h["covers"].size() == 8);
        CHECK(j["results"]["status"] == "EXACT");
    }

    TEST_CASE("flow: hom(w, t) is empty")
    {
        auto j = run_json("flow sphere.json matching61.json --from w --to t");
        CHECK(j["results"]["homs"][0]["classes"].empty());
    }

    TEST_CASE("flow: face-poset mode has 4 classes and a unique bottom")
    {
        auto j = run_json("flow sphere.json matching-fc62.json --from t --to w");
        const auto& h = j["results"]["homs"][0];
        CHECK(h["classes"].size() == 4);
        CHECK(h["bottom"] == "t > z < b > y < x > w");
        CHECK(j["results"]["category"] == "face-poset");
        CHECK_FALSE(j["warnings"].empty());
    }

    TEST_CASE("homology subcommands reproduce the fixtures")
    {
        auto nerve = run_json("homology nerve-flow sphere.json matching61.json --max-nerve-dim 3");
        CHECK(nerve["results"]["homology"]["betti"] == json({1, 0, 1}));
        auto fc = run_json("homology nerve-flow sphere.json matching-fc62.json");
        CHECK(fc["results"]["homology"]["betti"] == json({1, 0, 0}));
        auto morse = run_json("homology morse fig2.json fig2-matching.json --coefficients Z");
        CHECK(morse["results"]["homology"]["summary"] == "(Z, Z)");
        CHECK(morse["results"]["generators"] == json({{"w"}, {"yz"}, json::array()}));
        CHECK(morse["results"]["agrees"] == true);
        auto cx = run_json("homology complex sphere.json");
        CHECK(cx["results"]["homology"]["summary"] == "(Z, 0, Z)");
        auto en = run_json("homology nerve-en sphere.json --coefficients Q");
        CHECK(en["results"]["homology"]["betti"] == json({1, 0, 1}));
        auto cs = run_json("homology cosheaf sphere.json sphere-cosheaf.json");
        CHECK(cs["results"]["homology"]["summary"] == "(Z, 0, Z)");
    }

    TEST_CASE("json output is byte-for-byte deterministic")
    {
        for (const char* args : {"flow sphere.json matching61.json --format json",
                                 "homology nerve-flow sphere.json matching-fc62.json --format json",
                                 "validate fig2.json fig2-matching.json --format json"}) {
            auto a = run(args), b = run(args);
            CHECK(a.code == 0);
            CHECK(a.out == b.out);
        }
    }

    TEST_CASE("malformed JSON exits 1 with a position")
    {
        auto path = temp_file("broken.json", "{\"cells\": [\n  {\"id\": \"a\", \"dim\": 0},\n  oops\n]}");
        auto r = run("validate " + path);
        CHECK(r.code == 1);
        CHECK(r.out.find("broken.json:3:") != std::string::npos);
    }

    TEST_CASE("structural input errors name the field")
    {
        auto path = temp_file("nodim.json", R"({"cells": [{"id": "a"}], "covers": []})");
        auto r = run("validate " + path);
        CHECK(r.code == 1);
        CHECK(r.out.find("/cells/0") != std::string::npos);
    }

    TEST_CASE("a singular matched map over Z exits 2")
    {
        auto path = temp_file("singular.json", R"({
  "ring": "Z",
  "stalks": {"w": 1, "x": 1, "y": 1, "z": 1, "wx": 1, "wy": 1, "xy": 1, "xz": 1, "yz": 1, "wxy": 1},
  "maps": {
    "wx>w": [[1]], "wx>x": [[1]], "wy>w": [[1]], "wy>y": [[1]], "xy>x": [[1]], "xy>y": [[1]],
    "xz>x": [[1]], "xz>z": [[2]], "yz>y": [[1]], "yz>z": [[1]],
    "wxy>wx": [[1]], "wxy>wy": [[1]], "wxy>xy": [[1]]
  }
})");
        auto r = run("homology morse fig2.json fig2-matching.json " + path);
        CHECK(r.code == 2);
        CHECK(r.out.find("xz>z") != std::string::npos);
    }

    TEST_CASE("a broken cosheaf diamond exits 1")
    {
        auto path = temp_file("broken-cosheaf.json", R"({
  "ring": "Z",
  "stalks": {"w": 1, "y": 1, "x": 1, "z": 1, "t": 1, "b": 1},
  "maps": {"x>w": [[1]], "x>y": [[1]], "z>w": [[1]], "z>y": [[1]],
           "t>x": [[2]], "t>z": [[1]], "b>x": [[1]], "b>z": [[1]]}
})");
        auto r = run("homology cosheaf sphere.json " + path + " --format json");
        CHECK(r.code == 1);
        auto j = json::parse(r.out);
        CHECK(j["results"]["cosheaf"]["ok"] == false);
    }

    TEST_CASE("unknown files and flags exit 1")
    {
        CHECK(run("validate no-such-file.json").code == 1);
        CHECK(run("flow sphere.json matching61.json --max-zigzag-len x").code == 1);
        CHECK(run("homology nerve-flow sphere.json matching61.json --coefficients R").code == 1);
    }

    TEST_CASE("fixture list and run")
    {
        auto list = run_json("fixture list");
        std::vector<std::string> names;
        for (const auto& f : list["results"]["fixtures"]) names.push_back(f["name"]);
        for (const char* n : {"sphere", "fig2", "calc61", "calc62", "calc63"})
            CHECK(std::find(names.begin(), names.end(), n) != names.end());
        for (const char* n : {"sphere", "fig2", "calc61", "calc62", "triangle-cycle"}) {
            auto j = run_json(std::string("fixture run ") + n);
            CHECK_MESSAGE(j["results"]["ok"] == true, n);
        }
    }

    TEST_CASE("in-process commands match the report schema")
    {
        flowcat::app::Inputs in;
        in.complex_text = *flowcat::app::fixture_file("sphere.json");
        auto r = flowcat::app::cmd_homology(in, "complex", {});
        CHECK(r.exit_code == flowcat::app::exit_ok);
        CHECK(r.json.contains("command"));
        CHECK(r.json.contains("results"));
        CHECK(r.json.contains("warnings"));
        CHECK(flowcat::app::render_text(r).find("(Z, 0, Z)") != std::string::npos);
    }
}
