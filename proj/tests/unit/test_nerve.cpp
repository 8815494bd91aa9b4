#include "flowcat/cellcx.hpp"
#include "flowcat/nerve.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace flowcat;

namespace {

using Betti = std::vector<std::size_t>;

HomPoset crown(std::size_t k)
{
    // Minima 0..k-1, maxima k..2k-1; minimum i lies below maxima i and i+1 (mod k).
    HomPoset p;
    for (std::size_t i = 0; i < k; ++i) p.labels.push_back("m" + std::to_string(i));
    for (std::size_t i = 0; i < k; ++i) p.labels.push_back("M" + std::to_string(i));
    p.leq.assign(2 * k, std::vector<char>(2 * k, 0));
    for (std::size_t i = 0; i < 2 * k; ++i) p.leq[i][i] = 1;
    for (std::size_t i = 0; i < k; ++i) {
        p.leq[i][k + i] = 1;
        p.leq[i][k + (i + 1) % k] = 1;
    }
    return p;
}

HomPoset chain(std::size_t n)
{
    HomPoset p;
    for (std::size_t i = 0; i < n; ++i) p.labels.push_back("c" + std::to_string(i));
    p.leq.assign(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) p.leq[i][j] = 1;
    return p;
}

}  // namespace

TEST_SUITE("nerve")
{
    TEST_CASE("nerve of a one-object trivial category is a point")
    {
        PCategory cat({"p"});
        HomPoset h;
        h.labels = {"p"};
        h.leq = {{1}};
        cat.set_hom(0, 0, h);
        cat.set_identity(0, 0);
        auto sk = geometric_nerve(cat, 3);
        CHECK(sk.count(0) == 1);
        CHECK(sk.count(1) == 0);
        CHECK(sk.count(1, false) == 1);
        CHECK(sk.count(2) == 0);
        CHECK(nerve_homology(cat, 3, Ring::rationals()).betti() == Betti{1, 0, 0});
    }

    TEST_CASE("entrance path nerve of the sphere has Betti (1, 0, 1)")
    {
        auto en = entrance_path_category(testfx::sphere());
        auto h = nerve_homology(en, 3, Ring::rationals());
        CHECK(h.betti() == Betti{1, 0, 1});
    }

    TEST_CASE("face poset nerve of fig2 is a circle")
    {
        auto fc = face_poset_category(testfx::fig2());
        auto h = nerve_homology(fc, 3, Ring::integers());
        CHECK(h.betti() == Betti{1, 1, 0});
        CHECK(h.to_string() == "(Z, Z)");
    }

    TEST_CASE("nerve of a poset category matches its order complex")
    {
        for (const auto& p : {crown(4), chain(3), crown(3)}) {
            auto cat = poset_category(p);
            auto nerve = geometric_nerve(cat, 3);
            auto oc = order_complex(p, 3);
            for (std::size_t n = 0; n <= 3; ++n) CHECK(nerve.count(n) == oc.count(n));
            CHECK(truncate(nerve_homology(cat, 3, Ring::integers()), 2) ==
                  truncate(order_complex_homology(p, Ring::integers()), 2));
        }
    }

    TEST_CASE("order complexes: 8-crown is a circle, bottomed poset and chain are points")
    {
        CHECK(order_complex_homology(crown(4), Ring::integers()).betti() == Betti{1, 1});
        HomPoset bottomed;
        bottomed.labels = {"bot", "p", "q", "r"};
        bottomed.leq = {{1, 1, 1, 1}, {0, 1, 0, 1}, {0, 0, 1, 0}, {0, 0, 0, 1}};
        CHECK(order_complex_homology(bottomed, Ring::integers()).betti() == Betti{1, 0, 0});
        auto h = order_complex_homology(chain(3), Ring::integers());
        CHECK(reduced_betti(h) == Betti{0, 0, 0});
    }

    TEST_CASE("8-gon oracle: independent simplicial homology of the crown")
    {
        // 8 vertices and 8 edges in one cycle: b0 = 1 and b1 = 8 - (8 - 1) = 1.
        auto sk = order_complex(crown(4));
        CHECK(sk.count(0) == 8);
        CHECK(sk.count(1) == 8);
        CHECK(sk.count(2) == 0);
        auto cc = normalized_chain_complex(sk, Ring::rationals());
        CHECK(oracle::betti_q(cc) == Betti{1, 1});
    }

    TEST_CASE("degeneracy predicate")
    {
        auto en = entrance_path_category(testfx::sphere());
        auto t = *en.find_object("t"), x = *en.find_object("x");
        Simplex s;
        s.objects = {t, t, x};
        s.f = {en.identity(t), testfx::mor(en, "t>x"), testfx::mor(en, "t>x")};
        CHECK(is_degenerate(en, s));
        s.objects = {t, x, x};
        s.f = {testfx::mor(en, "t>x"), testfx::mor(en, "t>x"), en.identity(x)};
        CHECK(is_degenerate(en, s));
        auto w = *en.find_object("w");
        s.objects = {t, x, w};
        s.f = {testfx::mor(en, "t>x"), testfx::mor(en, "t>x>w"), testfx::mor(en, "x>w")};
        CHECK_FALSE(is_degenerate(en, s));
        CHECK(edge_index(2, 0, 1) == 0);
        CHECK(edge_index(2, 0, 2) == 1);
        CHECK(edge_index(2, 1, 2) == 2);
    }

    TEST_CASE("reduced Betti numbers and truncation")
    {
        auto h = order_complex_homology(crown(4), Ring::integers());
        CHECK(reduced_betti(h) == Betti{0, 1});
        CHECK(truncate(h, 1).betti() == Betti{1});
    }

    TEST_CASE("random complexes: entrance path nerve homology equals cellular homology")
    {
        std::mt19937 rng(303);
        for (int trial = 0; trial < 30; ++trial) {
            auto c = oracle::random_complex(rng, 9);
            auto cell = homology(cellular_chain_complex(c, assign_incidence_signs(c), Ring::rationals()));
            auto en = entrance_path_category(c);
            auto top = static_cast<std::size_t>(std::max(c.dimension(), 0));
            auto sk = geometric_nerve(en, top + 2);
            CHECK(first_square_failure(normalized_chain_complex(sk, Ring::integers())) == -1);
            auto h = nerve_homology(en, top + 2, Ring::rationals());
            CHECK(truncate(h, top + 1).betti() == cell.betti());
        }
    }
}
