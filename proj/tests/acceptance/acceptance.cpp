#include "fixtures.hpp"
#include "oracles.hpp"
#include "properties.hpp"

#include "flowcat/cosheaf.hpp"
#include "flowcat/nerve.hpp"
#include "flowcat/zigloc.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace flowcat;

namespace {

using Betti = std::vector<std::size_t>;

std::string show(const Betti& b)
{
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
    os << ")";
    return os.str();
}

// Collects failed expectations for one criterion.
struct Verdict {
    std::vector<std::string> problems;

    void expect(bool cond, const std::string& what)
    {
        if (!cond) problems.push_back(what);
    }
};

struct Criterion {
    int id;
    std::string title;
    double limit_s;
    std::function<void(Verdict&)> run;
};

void sphere_baseline(Verdict& v)
{
    auto c = testfx::sphere();
    auto cell = homology(cellular_chain_complex(c, assign_incidence_signs(c), Ring::integers()));
    v.expect(cell.to_string() == "(Z, 0, Z)", "cellular homology " + cell.to_string());
    auto nerve = nerve_homology(entrance_path_category(c), 3, Ring::rationals());
    v.expect(nerve.betti() == Betti{1, 0, 1}, "entrance path nerve Betti " + show(nerve.betti()));
}

void sphere_classical(Verdict& v)
{
    auto c = testfx::sphere();
    auto en = entrance_path_category(c);
    auto s = matching_to_morse_system(en, c, testfx::matching(c, "matching61.json"));
    auto flow = flow_category(en, s, -1);
    auto t = *flow.cat.find_object("t"), w = *flow.cat.find_object("w");
    const auto& tw = flow.cat.hom(t, w);
    v.expect(tw.size() == 8, "hom(t, w) has " + std::to_string(tw.size()) + " classes");
    auto oc = order_complex_homology(tw, Ring::integers()).betti();
    v.expect(oc == Betti{1, 1}, "order complex Betti " + show(oc));
    auto nerve = nerve_homology(flow.cat, 3, Ring::rationals()).betti();
    v.expect(nerve == Betti{1, 0, 1}, "flow nerve Betti " + show(nerve));
    v.expect(flow.cat.hom(w, t).empty(), "hom(w, t) is not empty");
}

void face_poset_failure(Verdict& v)
{
    auto c = testfx::sphere();
    auto en = entrance_path_category(c);
    auto s = matching_to_morse_system(en, c, testfx::matching(c, "matching61.json"));
    auto fc = face_poset_category(c);
    auto fc_s = make_morse_system(fc, {testfx::mor(fc, "x>y"), testfx::mor(fc, "b>z")});
    auto flow = projected_flow_category(en, s, fc, fc_s);
    auto t = *flow.cat.find_object("t"), w = *flow.cat.find_object("w");
    const auto& tw = flow.cat.hom(t, w);
    v.expect(tw.size() == 4, "hom(t, w) has " + std::to_string(tw.size()) + " classes");
    v.expect(tw.minimum().has_value(), "hom(t, w) has no unique bottom");
    auto nerve = nerve_homology(flow.cat, 3, Ring::rationals()).betti();
    v.expect(nerve == Betti{1, 0, 0}, "flow nerve Betti " + show(nerve));
}

void generalized_matching(Verdict& v)
{
    auto c = testfx::sphere();
    auto en = entrance_path_category(c);
    auto s = matching_to_morse_system(en, c, testfx::matching(c, "matching63.json"));
    auto run = stabilized_flow(en, s, 4, 8, 3, Ring::rationals());
    v.expect(run.status == Stability::Stable, "status " + to_string(run.status));
    v.expect(run.nerve.betti() == Betti{1, 0, 1},
             "flow nerve Betti " + show(run.nerve.betti()) + " at max_len " + std::to_string(run.max_len));
}

void morse_compression(Verdict& v)
{
    auto c = testfx::fig2();
    auto m = testfx::matching(c, "fig2-matching.json");
    auto critical = matching_critical_cells(c, m);
    std::vector<std::string> names;
    for (auto x : critical) names.push_back(c.id(x));
    v.expect(names == std::vector<std::string>{"w", "yz"}, "critical cells differ");
    auto signs = assign_incidence_signs(c);
    auto mc = morse_chain_complex(c, signs, Cosheaf::constant(c, Ring::integers()), m);
    auto h = homology(mc.complex);
    auto cell = homology(cellular_chain_complex(c, signs, Ring::integers()));
    v.expect(h.to_string() == "(Z, Z)", "Morse homology " + h.to_string());
    v.expect(h == cell, "Morse homology differs from cellular " + cell.to_string());
}

void property_suite(Verdict& v)
{
    const std::uint32_t instances = 120;
    std::map<char, std::size_t> failures;
    for (std::uint32_t seed = 1000; seed < 1000 + instances; ++seed) {
        auto r = props::check_instance(seed);
        v.expect(r.cells <= 12, "instance with more than 12 cells");
        for (const auto& [p, list] : r.failures) {
            failures[p] += list.size();
            if (failures[p] == list.size())
                v.problems.push_back(std::string("(") + p + ") seed " + std::to_string(seed) + ": " + list.front());
        }
    }
}

void smith_oracle(Verdict& v)
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> dim(1, 6), entry(-9, 9);
    for (int i = 0; i < 200; ++i) {
        std::size_t r = static_cast<std::size_t>(dim(rng)), c = static_cast<std::size_t>(dim(rng));
        IntMatrix m(r, std::vector<mpz_class>(c));
        for (auto& row : m)
            for (auto& x : row) x = entry(rng);
        auto snf = smith_normal_form(m);
        bool ok = invariant_factors(snf) == oracle::invariant_factors_by_minors(m) &&
                  multiply(multiply(snf.U, m), snf.V) == snf.D;
        v.expect(ok, "matrix " + std::to_string(i) + " disagrees");
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app("Acceptance checks");
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-7)")->check(CLI::Range(1, 7));
    CLI11_PARSE(app, argc, argv);

    std::vector<Criterion> all = {
        {1, "sphere cellular (Z, 0, Z) and entrance path nerve (1, 0, 1)", 10, sphere_baseline},
        {2, "classical sphere flow: 8-class circle hom, nerve (1, 0, 1), empty hom(w, t)", 30, sphere_classical},
        {3, "face-poset flow: 4 classes with a bottom, nerve (1, 0, 0)", 10, face_poset_failure},
        {4, "generalized pair b>y: STABLE with nerve (1, 0, 1)", 60, generalized_matching},
        {5, "fig2 Morse complex on {w, yz} with homology (Z, Z)", 5, morse_compression},
        {6, "property suite on 120 random complexes", 600, property_suite},
        {7, "Smith normal form vs gcd-of-minors on 200 matrices", 30, smith_oracle},
    };

    int failed = 0;
    for (const auto& c : all) {
        if (only && c.id != only) continue;
        Verdict v;
        auto start = std::chrono::steady_clock::now();
        try {
            c.run(v);
        } catch (const std::exception& e) {
            v.problems.push_back(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.limit_s) v.problems.push_back("took longer than " + std::to_string(c.limit_s) + " s");
        bool ok = v.problems.empty();
        failed += !ok;
        std::printf("%s criterion %d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), secs);
        for (const auto& p : v.problems) std::printf("    %s\n", p.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
