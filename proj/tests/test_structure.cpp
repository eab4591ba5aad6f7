#include "bvh/games.hpp"
#include "bvh/k3.hpp"
#include "bvh/structure.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace bvh;

TEST_CASE("adjacency basics") {
    auto K3 = complete_graph(3);
    CHECK(K3.is_adjacent({0, 0}, {0, 1}));
    CHECK_FALSE(K3.is_adjacent({0, 0}, {0, 0}));
    // the k=3 existential board: cc(0,0) = cc(1,1) = 0
    auto B3 = existential_b_board(3);
    CHECK_FALSE(B3.is_adjacent({0, 0}, {1, 1}));
    CHECK(B3.is_adjacent({0, 0}, {0, 1}));
}

TEST_CASE("symmetry and irreflexivity of built structures") {
    std::mt19937_64 rng(1);
    for (auto v : {Variant::full_k3, Variant::reduced_k3})
        for (bool shifted : {false, true}) {
            auto pr = build_k3_pair(3, v, shifted, false);
            for (auto* S : {&pr.A, &pr.B}) {
                for (size_t i = 0; i < S->size(); ++i) CHECK_FALSE(S->adj(i, i));
                for (int s = 0; s < 2000; ++s) {
                    size_t i = rng() % S->size(), j = rng() % S->size();
                    CHECK(S->adj(i, j) == S->adj(j, i));
                }
            }
        }
}

TEST_CASE("A and B differ only in edges") {
    for (bool c : {false, true}) {
        auto pr = build_k3_pair(3, Variant::reduced_k3, true, c);
        CHECK(pr.A.vertices() == pr.B.vertices());
        CHECK(pr.A.constants() == pr.B.constants());
        for (size_t i = 0; i < pr.A.size(); ++i)
            for (size_t j = 0; j < pr.A.size(); ++j)
                if (pr.B.adj(i, j)) CHECK(pr.A.adj(i, j));
    }
}

TEST_CASE("partial isomorphism") {
    auto K2 = ordered_path(2);
    auto I2 = edgeless_order(2);
    CHECK(partial_isomorphism(K2, K2, {{K2.vertex(0), K2.vertex(0)}, {K2.vertex(1), K2.vertex(1)}}));
    CHECK_FALSE(partial_isomorphism(K2, I2, {{K2.vertex(0), I2.vertex(0)}, {K2.vertex(1), I2.vertex(1)}}));
    // order reversal is caught
    auto L = edgeless_order(3);
    CHECK_FALSE(partial_isomorphism(L, L, {{L.vertex(0), L.vertex(1)}, {L.vertex(1), L.vertex(0)}}));
    // a map that is not a function
    CHECK_FALSE(partial_isomorphism(L, L, {{L.vertex(0), L.vertex(0)}, {L.vertex(0), L.vertex(1)}}));

    auto pr = build_k3_pair(3, Variant::reduced_k3, true, false);
    // (14,2): idx 3, [14]_3 = 3 gives cc = 1, and 3 is not a border cell
    PartialMap p{{{18, 0}, {18, 0}}, {{18, 2}, {14, 2}}};
    CHECK(partial_isomorphism(pr.A, pr.B, p));
    PartialMap q{{{18, 0}, {18, 0}}, {{18, 2}, {18, 2}}};
    CHECK_FALSE(partial_isomorphism(pr.A, pr.B, q));
}

TEST_CASE("partial isomorphism ignores pair order") {
    auto pr = build_k3_pair(3, Variant::reduced_k3, true, false);
    std::mt19937_64 rng(2);
    for (int s = 0; s < 300; ++s) {
        IndexMap p;
        for (int t = 0; t < 4; ++t) p.emplace_back(rng() % 96, rng() % 96);
        bool v = partial_isomorphism_idx(pr.A, pr.B, p);
        std::shuffle(p.begin(), p.end(), rng);
        CHECK(partial_isomorphism_idx(pr.A, pr.B, p) == v);
    }
}

TEST_CASE("cliques, triangles and girth") {
    auto K3 = complete_graph(3);
    auto c = has_clique(K3, 3);
    REQUIRE(c);
    CHECK(c->size() == 3);
    CHECK(count_triangles(K3) == 1);
    CHECK(girth(K3) == 3);
    CHECK_FALSE(girth(edgeless_order(4)));

    auto pr = build_k3_pair(3, Variant::reduced_k3, false, false);
    CHECK_FALSE(has_clique(pr.B, 3));
    auto t = has_clique(pr.A, 3);
    REQUIRE(t);
    CHECK(girth(pr.B) == 4);
    CHECK(girth(pr.A) == 3);
    CHECK(count_triangles(pr.A) == 8);
    // every triangle of A uses the critical edge
    size_t a = *pr.A.index_of({18, 0}), b = *pr.A.index_of({18, 2});
    for (auto& tri : list_triangles(pr.A)) {
        CHECK(std::find(tri.begin(), tri.end(), a) != tri.end());
        CHECK(std::find(tri.begin(), tri.end(), b) != tri.end());
    }
}

TEST_CASE("json round trip") {
    auto K2 = ordered_path(2);
    auto j = export_json(K2);
    CHECK(import_json(j) == K2);
    auto E = edgeless_order(0);
    CHECK(import_json(export_json(E)) == E);
    auto pr = build_k3_pair(3, Variant::reduced_k3, true, true);
    auto again = import_json(export_json(pr.B));
    CHECK(again == pr.B);
    CHECK(again.size() == 96);
    CHECK(again.constants().size() == 6);
    CHECK_THROWS_AS(import_json("{\"vertices\": 3}"), ParseError);
    CHECK_THROWS_AS(import_json("not json"), ParseError);
}

TEST_CASE("dot export names nodes by coordinates") {
    auto d = export_dot(ordered_path(2));
    CHECK(d.find("graph") != std::string::npos);
    CHECK(d.find("v0_0") != std::string::npos);
    CHECK(d.find("--") != std::string::npos);
}
