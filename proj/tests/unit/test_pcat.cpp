#include "flowcat/errors.hpp"
#include "flowcat/pcat.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace flowcat;
using testfx::mor;

namespace {

HomPoset poset(std::vector<std::string> labels, const std::vector<std::pair<std::size_t, std::size_t>>& rel)
{
    HomPoset p;
    std::size_t n = labels.size();
    p.labels = std::move(labels);
    std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
    for (auto [a, b] : rel) r[a][b] = 1;
    p.leq = transitive_closure(r);
    return p;
}

std::vector<std::string> labels_of(const PCategory& cat, std::size_t x, std::size_t y)
{
    return cat.hom(x, y).labels;
}

}  // namespace

TEST_SUITE("pcat")
{
    TEST_CASE("face poset category of the sphere")
    {
        auto s = testfx::sphere();
        auto fc = face_poset_category(s);
        auto t = *fc.find_object("t"), w = *fc.find_object("w");
        CHECK(fc.hom(t, w).size() == 1);
        CHECK(fc.hom(w, t).empty());
        CHECK(fc.hom(t, t).size() == 1);
        CHECK(fc.is_identity(fc.identity(t)));
        CHECK(check_pcategory(fc).ok());
    }

    TEST_CASE("entrance paths of the sphere")
    {
        auto s = testfx::sphere();
        auto en = entrance_path_category(s);
        auto t = *en.find_object("t"), x = *en.find_object("x"), w = *en.find_object("w");
        CHECK(labels_of(en, t, x) == std::vector<std::string>{"t>x"});
        CHECK(labels_of(en, t, w) == std::vector<std::string>{"t>w", "t>x>w", "t>z>w"});
        auto tw = mor(en, "t>w");
        CHECK(en.le(tw, mor(en, "t>x>w")));
        CHECK(en.le(tw, mor(en, "t>z>w")));
        CHECK_FALSE(en.le(mor(en, "t>x>w"), mor(en, "t>z>w")));
        CHECK_FALSE(en.le(mor(en, "t>x>w"), tw));
        CHECK(en.compose_total(mor(en, "t>x"), mor(en, "x>w")) == mor(en, "t>x>w"));
        CHECK(check_pcategory(en).ok());
    }

    TEST_CASE("atoms in the entrance path category")
    {
        auto en = entrance_path_category(testfx::sphere());
        auto t = *en.find_object("t"), w = *en.find_object("w");
        auto a = atom(en, t, w);
        REQUIRE(a);
        CHECK(en.label(*a) == "t>w");
        CHECK_FALSE(atom(en, w, t));
        CHECK(is_cellular(en));
    }

    TEST_CASE("face poset: t>w factors through an edge, so it is not an atom")
    {
        auto fc = face_poset_category(testfx::sphere());
        auto t = *fc.find_object("t"), w = *fc.find_object("w"), x = *fc.find_object("x");
        CHECK_THROWS_AS(atom(fc, t, w), NoAtom);
        CHECK(atom(fc, t, x));
        CHECK_FALSE(is_cellular(fc));
    }

    TEST_CASE("two incomparable parallel morphisms have no atom")
    {
        PCategory cat({"a", "b"});
        cat.set_hom(0, 0, poset({"a"}, {}));
        cat.set_hom(1, 1, poset({"b"}, {}));
        cat.set_hom(0, 1, poset({"f", "g"}, {}));
        cat.set_identity(0, 0);
        cat.set_identity(1, 0);
        CHECK(check_pcategory(cat).ok());
        CHECK_THROWS_AS(atom(cat, 0, 1), NoAtom);
        CHECK_FALSE(is_cellular(cat));
    }

    TEST_CASE("homotopy extremal object")
    {
        auto chain = poset_category(poset({"m", "a", "b"}, {{0, 1}, {0, 2}}));
        auto e = find_homotopy_extremal(chain);
        REQUIRE(e);
        CHECK(chain.object(e->object) == "m");
        CHECK(e->kind == Extremal::Minimal);

        // Four elements over a bottom, shaped like the face-poset hom at (t, w).
        auto four = poset_category(poset({"bot", "p", "q", "r"}, {{0, 1}, {0, 2}, {0, 3}, {1, 3}}));
        auto e4 = find_homotopy_extremal(four);
        REQUIRE(e4);
        CHECK(four.object(e4->object) == "bot");

        // Crown on 8 elements: minima m0..m3, maxima M0..M3, mi below Mi and M(i+1).
        std::vector<std::pair<std::size_t, std::size_t>> rel;
        for (std::size_t i = 0; i < 4; ++i) {
            rel.push_back({i, 4 + i});
            rel.push_back({i, 4 + (i + 1) % 4});
        }
        auto crown = poset_category(poset({"m0", "m1", "m2", "m3", "M0", "M1", "M2", "M3"}, rel));
        CHECK_FALSE(find_homotopy_extremal(crown));
    }

    TEST_CASE("global maximum is found when there is no minimum")
    {
        auto p = poset_category(poset({"a", "b", "top"}, {{0, 2}, {1, 2}}));
        auto e = find_homotopy_extremal(p);
        REQUIRE(e);
        CHECK(p.object(e->object) == "top");
        CHECK(e->kind == Extremal::Maximal);
    }

    TEST_CASE("hom poset helpers")
    {
        auto p = poset({"a", "b", "c"}, {{0, 1}, {1, 2}});
        CHECK(p.le(0, 2));
        CHECK(p.cover_relations() == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}});
        CHECK(p.minimum() == 0);
        CHECK(p.maximum() == 2);
        CHECK(split_path("t>x>w") == std::vector<std::string>{"t", "x", "w"});
    }

    TEST_CASE("random complexes: path counts, antisymmetry, monotone composition")
    {
        std::mt19937 rng(202);
        for (int trial = 0; trial < 40; ++trial) {
            auto c = oracle::random_complex(rng);
            auto en = entrance_path_category(c);
            for (std::size_t x = 0; x < c.size(); ++x)
                for (std::size_t y = 0; y < c.size(); ++y)
                    CHECK(en.hom(x, y).size() == oracle::descending_chains(c, x, y));
            CHECK(check_pcategory(en).ok());
            CHECK(is_cellular(en));
        }
    }
}
