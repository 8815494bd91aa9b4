#include "flowcat/errors.hpp"
#include "flowcat/nerve.hpp"
#include "flowcat/zigloc.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace flowcat;
using testfx::mor;

namespace {

using Betti = std::vector<std::size_t>;

struct ClassicalSphere {
    Complex c = testfx::sphere();
    PCategory en = entrance_path_category(c);
    MorseSystem s = matching_to_morse_system(en, c, testfx::matching(c, "matching61.json"));
    std::size_t t = *en.find_object("t");
    std::size_t w = *en.find_object("w");

    Zigzag z(const std::string& text) const { return parse_zigzag(en, s, text); }
    std::string fmt(const Zigzag& zz) const { return format_zigzag(en, zz); }
};

const ClassicalSphere& classical_sphere()
{
    static const ClassicalSphere fx;
    return fx;
}

const LocHom& classical_hom()
{
    static const LocHom h = hom_poset_loc(classical_sphere().en, classical_sphere().s, classical_sphere().t, classical_sphere().w, -1);
    return h;
}

const FlowCategory& classical_flow()
{
    static const FlowCategory f = flow_category(classical_sphere().en, classical_sphere().s, -1);
    return f;
}

std::vector<std::string> sigma_labels(const PCategory& cat, const std::vector<Mor>& v)
{
    std::vector<std::string> out;
    for (const auto& f : v) out.push_back(cat.label(f));
    return out;
}

}  // namespace

TEST_SUITE("zigloc")
{
    TEST_CASE("zigzag text round trip")
    {
        const auto& fx = classical_sphere();
        for (const char* text : {"t > z < b > z > w", "t > x > y < x > w", "t > w", "t > z < b > x > y < x > w"}) {
            auto zz = fx.z(text);
            CHECK(well_formed(fx.en, fx.s, zz));
            CHECK(fx.fmt(zz) == text);
        }
        CHECK_THROWS_AS(fx.z("t > w < b"), ParseError);
        CHECK_THROWS_AS(fx.z("t > q"), ParseError);
    }

    TEST_CASE("reductions from the sphere calculation")
    {
        const auto& fx = classical_sphere();
        CHECK(fx.fmt(reduce_zigzag(fx.en, fx.s, fx.z("t > z < b > z > w"))) == "t > z > w");
        CHECK(fx.fmt(reduce_zigzag(fx.en, fx.s, fx.z("t > x > y < x > w"))) == "t > x > w");
        auto plain = fx.z("t > x > w");
        CHECK(reduce_zigzag(fx.en, fx.s, plain) == plain);
        CHECK(is_irreducible(fx.en, fx.s, plain));
        CHECK_FALSE(is_irreducible(fx.en, fx.s, fx.z("t > z < b > z > w")));
    }

    TEST_CASE("concatenation joins forward arrows at the seam")
    {
        const auto& fx = classical_sphere();
        auto a = fx.z("t > z < b > x");
        auto b = fx.z("x > w");
        CHECK(fx.fmt(concatenate(fx.en, a, b)) == "t > z < b > x > w");
        CHECK(plain_zigzag(mor(fx.en, "t>w")) == fx.z("t > w"));
    }

    TEST_CASE("twelve raw zigzags from t to w, none from w to t")
    {
        const auto& fx = classical_sphere();
        CHECK(classical_mode(fx.en, fx.s));
        auto all = enumerate_zigzags(fx.en, fx.s, fx.t, fx.w, -1);
        CHECK(all.size() == 12);
        std::set<std::string> texts;
        for (const auto& zz : all) {
            CHECK(well_formed(fx.en, fx.s, zz));
            texts.insert(fx.fmt(zz));
        }
        CHECK(texts.size() == 12);
        CHECK(texts.count("t > z < b > x > y < x > w"));
        CHECK(enumerate_zigzags(fx.en, fx.s, fx.w, fx.t, -1).empty());
        auto plain = enumerate_zigzags(fx.en, fx.s, fx.t, fx.w, 0);
        CHECK(plain.size() == fx.en.hom(fx.t, fx.w).size());
        for (const auto& zz : plain) CHECK(zz.backward.empty());
    }

    TEST_CASE("sphere hom(t, w): eight classes in a cycle")
    {
        const auto& h = classical_hom();
        CHECK(h.exact);
        CHECK(h.classes.size() == 8);
        CHECK(h.poset.cover_relations().size() == 8);
        std::size_t members = 0;
        for (const auto& c : h.classes) members += c.members.size();
        CHECK(members == 12);
        CHECK(order_complex_homology(h.poset, Ring::integers()).betti() == Betti{1, 1});
        CHECK(h.poset.find("t > x > w"));
        CHECK(h.poset.find("t > z > w"));
        CHECK(h.poset.find("t > w"));
        CHECK_FALSE(h.poset.minimum());
        CHECK_FALSE(h.poset.maximum());
        // Each element of a crown has exactly two neighbours.
        for (std::size_t a = 0; a < h.poset.size(); ++a) {
            int degree = 0;
            for (auto [lo, hi] : h.poset.cover_relations()) degree += lo == a || hi == a;
            CHECK(degree == 2);
        }
    }

    TEST_CASE("identified zigzags share a class")
    {
        const auto& fx = classical_sphere();
        const auto& h = classical_hom();
        CHECK(h.class_of(fx.z("t > z < b > z > w")) == h.class_of(fx.z("t > z > w")));
        CHECK(h.class_of(fx.z("t > x > y < x > w")) == h.class_of(fx.z("t > x > w")));
        CHECK(h.class_of(fx.z("t > y < x > w")) != h.class_of(fx.z("t > x > w")));
    }

    TEST_CASE("sphere flow category")
    {
        const auto& fx = classical_sphere();
        const auto& f = classical_flow();
        REQUIRE(f.cat.num_objects() == 2);
        auto t = *f.cat.find_object("t"), w = *f.cat.find_object("w");
        CHECK(f.cat.hom(t, w).size() == 8);
        CHECK(f.cat.hom(w, t).empty());
        CHECK(f.cat.hom(t, t).size() == 1);
        CHECK(f.cat.hom(w, w).size() == 1);
        CHECK(check_pcategory(f.cat).ok());
        auto h = nerve_homology(f.cat, 3, Ring::rationals());
        CHECK(h.betti() == Betti{1, 0, 1});
        // Suspension: the nerve's reduced homology is the hom order complex's shifted up by one.
        auto hom_reduced = reduced_betti(order_complex_homology(f.cat.hom(t, w), Ring::rationals()));
        auto nerve_reduced = reduced_betti(h);
        CHECK(nerve_reduced[0] == 0);
        for (std::size_t d = 0; d + 1 < nerve_reduced.size(); ++d)
            CHECK(nerve_reduced[d + 1] == (d < hom_reduced.size() ? hom_reduced[d] : 0));
        (void)fx;
    }

    TEST_CASE("essential chains")
    {
        const auto& fx = classical_sphere();
        CHECK(essential_chain(fx.en, fx.z("t > x > w")).empty());
        CHECK(essential_chain(fx.en, fx.z("t > x > y < x > w")).empty());
        auto roles = classify_arrows(fx.en, fx.z("t > x > y < x > w"));
        REQUIRE(roles.size() == 1);
        CHECK(roles[0] == ArrowRole::LeftRedundant);
        CHECK(sigma_labels(fx.en, essential_chain(fx.en, fx.z("t > y < x > w"))) ==
              std::vector<std::string>{"x>y"});
    }

    TEST_CASE("essential chain is constant on every class; reduction keeps the class")
    {
        const auto& fx = classical_sphere();
        for (const auto& cls : classical_hom().classes) {
            auto e = essential_chain(fx.en, cls.canonical);
            CHECK(cls.essential == e);
            for (const auto& m : cls.members) {
                CHECK(essential_chain(fx.en, m) == e);
                auto r = reduce_zigzag(fx.en, fx.s, m);
                CHECK(classical_hom().class_of(r) == classical_hom().class_of(m));
            }
        }
    }

    TEST_CASE("irreducible classical zigzags have strictly descending backward chains")
    {
        const auto& fx = classical_sphere();
        for (const auto& cls : classical_hom().classes)
            for (const auto& m : cls.members) {
                if (!is_irreducible(fx.en, fx.s, m)) continue;
                for (std::size_t i = 0; i + 1 < m.backward.size(); ++i) {
                    auto a = *fx.s.find(m.backward[i]), b = *fx.s.find(m.backward[i + 1]);
                    CHECK(a != b);
                    CHECK(fx.s.rel[a][b]);
                }
            }
    }

    TEST_CASE("diagram search agrees with the pairwise ladder check")
    {
        const auto& fx = classical_sphere();
        auto all = enumerate_zigzags(fx.en, fx.s, fx.t, fx.w, -1);
        for (auto mode : {DiagramMode::Equal, DiagramMode::Order})
            for (const auto& top : all) {
                std::set<ZigzagKey> partners;
                diagram_partners(fx.en, fx.s, top, mode, 2, [&](const Zigzag& b) {
                    CHECK(diagram_exists(fx.en, fx.s, top, b, mode));
                    partners.insert(zigzag_key(b));
                });
                for (const auto& bottom : all)
                    CHECK(diagram_exists(fx.en, fx.s, top, bottom, mode) ==
                          (partners.count(zigzag_key(bottom)) > 0));
            }
    }

    TEST_CASE("every zigzag is related to itself in both modes")
    {
        const auto& fx = classical_sphere();
        for (const auto& zz : enumerate_zigzags(fx.en, fx.s, fx.t, fx.w, -1)) {
            CHECK(diagram_exists(fx.en, fx.s, zz, zz, DiagramMode::Equal));
            CHECK(diagram_exists(fx.en, fx.s, zz, zz, DiagramMode::Order));
        }
    }

    TEST_CASE("empty Sigma leaves the entrance path category unchanged")
    {
        auto c = testfx::sphere();
        auto en = entrance_path_category(c);
        auto s = matching_to_morse_system(en, c, Matching{});
        auto t = *en.find_object("t"), w = *en.find_object("w");
        auto h = hom_poset_loc(en, s, t, w, -1);
        REQUIRE(h.classes.size() == en.hom(t, w).size());
        for (std::size_t a = 0; a < h.classes.size(); ++a)
            for (std::size_t b = 0; b < h.classes.size(); ++b) {
                const auto& fa = h.classes[a].canonical.forward[0];
                const auto& fb = h.classes[b].canonical.forward[0];
                CHECK(h.poset.le(a, b) == en.le(fa, fb));
            }
        auto flow = flow_category(en, s, -1);
        CHECK(flow.cat.num_objects() == en.num_objects());
        CHECK(flow.cat.total_morphisms() == en.total_morphisms());
    }

    TEST_CASE("face-poset projection: four classes with a unique bottom")
    {
        const auto& fx = classical_sphere();
        auto fc = face_poset_category(fx.c);
        auto fc_s = make_morse_system(fc, {mor(fc, "x>y"), mor(fc, "b>z")});
        auto h = projected_hom(fx.en, fx.s, fc, fc_s, fx.t, fx.w);
        CHECK(h.classes.size() == 4);
        auto bottom = h.poset.minimum();
        REQUIRE(bottom);
        CHECK(h.poset.labels[*bottom] == "t > z < b > y < x > w");
        auto flow = projected_flow_category(fx.en, fx.s, fc, fc_s);
        CHECK(nerve_homology(flow.cat, 3, Ring::rationals()).betti() == Betti{1, 0, 0});
        auto p = poset_category(h.poset);
        auto ext = find_homotopy_extremal(p);
        REQUIRE(ext);
        CHECK(p.object(ext->object) == "t > z < b > y < x > w");
    }

    TEST_CASE("literal face-poset localization collapses hom(t, w) to one class")
    {
        const auto& fx = classical_sphere();
        auto fc = face_poset_category(fx.c);
        auto fc_s = make_morse_system(fc, {mor(fc, "x>y"), mor(fc, "b>z")});
        auto h = hom_poset_loc(fc, fc_s, *fc.find_object("t"), *fc.find_object("w"), 4);
        CHECK(h.classes.size() == 1);
    }

    TEST_CASE("unbounded enumeration needs a classical system")
    {
        auto c = testfx::sphere();
        auto en = entrance_path_category(c);
        auto s = matching_to_morse_system(en, c, testfx::matching(c, "matching63.json"));
        CHECK_FALSE(classical_mode(en, s));
        CHECK_THROWS_AS(enumerate_zigzags(en, s, *en.find_object("t"), *en.find_object("w"), -1),
                        ComputationError);
    }
}
