#include "flowcat/zigloc.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <functional>
#include <set>

using namespace flowcat;

namespace {

struct GeneralizedSphere {
    Complex c = testfx::sphere();
    PCategory en = entrance_path_category(c);
    MorseSystem s = matching_to_morse_system(en, c, testfx::matching(c, "matching63.json"));
    std::size_t t = *en.find_object("t");
    std::size_t w = *en.find_object("w");
};

const GeneralizedSphere& generalized_sphere()
{
    static const GeneralizedSphere fx;
    return fx;
}

const LocHom& generalized_hom()
{
    static const LocHom h = hom_poset_loc(generalized_sphere().en, generalized_sphere().s, generalized_sphere().t, generalized_sphere().w, 4);
    return h;
}

}  // namespace

TEST_SUITE("zigloc-generalized")
{
    TEST_CASE("plain paths and the product block each form classes")
    {
        const auto& fx = generalized_sphere();
        const auto& h = generalized_hom();
        CHECK_FALSE(h.exact);
        CHECK(h.max_len == 4);
        for (const char* p : {"t > w", "t > x > w", "t > z > w"}) CHECK(h.class_of(parse_zigzag(fx.en, fx.s, p)));
        for (const char* a : {"t > y", "t > x > y", "t > z > y"})
            for (const char* b : {"b > w", "b > x > w", "b > z > w"}) {
                std::string text = std::string(a) + " < " + std::string(b);
                CHECK_MESSAGE(h.class_of(parse_zigzag(fx.en, fx.s, text)), text);
            }
    }

    TEST_CASE("essential chain is constant on classes at max_len 3")
    {
        const auto& fx = generalized_sphere();
        auto h = hom_poset_loc(fx.en, fx.s, fx.t, fx.w, 3);
        for (const auto& cls : h.classes)
            for (const auto& m : cls.members)
                CHECK_MESSAGE(essential_chain(fx.en, m) == cls.essential,
                              (format_zigzag(fx.en, m) + " in class " + format_zigzag(fx.en, cls.canonical)));
    }

    TEST_CASE("diagram search agrees with the pairwise ladder check at max_len 2")
    {
        const auto& fx = generalized_sphere();
        auto all = enumerate_zigzags(fx.en, fx.s, fx.t, fx.w, 2);
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

    TEST_CASE("order relations join the plain paths to the product block")
    {
        const auto& fx = generalized_sphere();
        const auto& h = generalized_hom();
        std::vector<std::size_t> plain, product;
        for (const char* p : {"t > w", "t > x > w", "t > z > w"})
            if (auto c = h.class_of(parse_zigzag(fx.en, fx.s, p))) plain.push_back(*c);
        for (const char* a : {"t > y", "t > x > y", "t > z > y"})
            for (const char* b : {"b > w", "b > x > w", "b > z > w"})
                if (auto c = h.class_of(parse_zigzag(fx.en, fx.s, std::string(a) + " < " + b))) product.push_back(*c);
        REQUIRE(plain.size() == 3);
        REQUIRE(product.size() == 9);

        // Connected components of the comparability graph of the whole hom-poset.
        std::size_t n = h.poset.size();
        std::vector<int> comp(n, -1);
        int next = 0;
        std::function<void(std::size_t)> mark = [&](std::size_t a) {
            for (std::size_t b = 0; b < n; ++b)
                if (comp[b] < 0 && (h.poset.le(a, b) || h.poset.le(b, a))) {
                    comp[b] = comp[a];
                    mark(b);
                }
        };
        for (std::size_t a = 0; a < n; ++a)
            if (comp[a] < 0) {
                comp[a] = next++;
                mark(a);
            }
        for (std::size_t p : plain)
            for (std::size_t q : product)
                CHECK_MESSAGE(comp[p] == comp[q], (h.poset.labels[p] + " and " + h.poset.labels[q]));
    }
}
