#include "bvh/games.hpp"
#include "bvh/k3.hpp"

#include <doctest.h>

using namespace bvh;

namespace {
K3BuildSpec spec(int m, Variant v) {
    K3BuildSpec s;
    s.m = m;
    s.variant = v;
    return s;
}
}  // namespace

TEST_CASE("B' rule") {
    auto s = spec(3, Variant::reduced_k3);
    auto Bp = build_b3m_prime(s);
    CHECK(Bp.size() == 96);
    for (auto [i, j] : Bp.edges()) CHECK(Bp.vertex(i).y != Bp.vertex(j).y);

    auto P = k3_params(spec(3, Variant::full_k3));
    // idx(19) = 1, so the lowest abstraction decides
    CHECK(P.idx(19) == 1);
    CHECK(k3_prime_rule(P, 18, 0, 19, 1) == (P.cc(19, 1, 1) != P.cc(18, 0, 1)));
    CHECK_FALSE(k3_prime_rule(P, 18, 0, 19, 1));
    CHECK(k3_prime_rule(P, 18, 0, 20, 1) == (P.cc(20, 1, 1) != P.cc(18, 0, 1)));
    CHECK_FALSE(k3_prime_rule(P, 5, 1, 9, 1));
}

TEST_CASE("omega deletions") {
    for (auto v : {Variant::full_k3, Variant::reduced_k3}) {
        auto s = spec(3, v);
        auto P = k3_params(s);
        auto Bp = build_b3m_prime(s);
        auto B = apply_omega_deletions(Bp, P);
        CHECK(B.edge_count() < Bp.edge_count());
        CHECK(count_triangles(B) == 0);
        // second application is a no-op
        CHECK(apply_omega_deletions(B, P) == B);
        // deletions only touch lower endpoints whose own-level cell is even
        for (auto [i, j] : Bp.edges()) {
            if (B.adj(i, j)) continue;
            const auto &a = Bp.vertex(i), &b = Bp.vertex(j);
            int ia = P.idx(a.x), ib = P.idx(b.x);
            const Vertex& low = ia <= ib ? a : b;
            int l = std::min(ia, ib);
            CHECK(P.floor_abs(low.x, l) % 2 == 0);
            CHECK(l < P.m);
        }
        for (auto [i, j] : B.edges()) CHECK(Bp.adj(i, j));
    }
}

TEST_CASE("critical edge") {
    for (auto v : {Variant::full_k3, Variant::reduced_k3}) {
        auto pr = build_k3_pair(3, v, false, false);
        BigInt mid = pr.P.mid();
        CHECK(pr.A.is_adjacent({mid, 0}, {mid, 2}));
        CHECK_FALSE(pr.B.is_adjacent({mid, 0}, {mid, 2}));
        CHECK(pr.A.is_adjacent({mid, 0}, {mid, 1}));
        CHECK(pr.A.is_adjacent({mid, 1}, {mid, 2}));
        CHECK(pr.A.edge_count() == pr.B.edge_count() + 1);
        CHECK(count_triangles(pr.B) == 0);
    }
}

TEST_CASE("circular shift") {
    auto s = spec(3, Variant::full_k3);
    auto P = k3_params(s);
    auto B = build_k3(s);
    auto Bt = circular_shift(B, P);
    const int64_t W = 384;
    CHECK(Bt.size() == B.size());
    for (int64_t x = 0; x < W; ++x) {
        CHECK(Bt.vertex(static_cast<size_t>(x)) == Vertex{x, 0});
        CHECK(Bt.vertex(static_cast<size_t>(2 * W + x)) == Vertex{x, 2});
    }
    CHECK(Bt.vertex(static_cast<size_t>(W + 37)) == Vertex{0, 1});
    CHECK(Bt.vertex(static_cast<size_t>(W)) == Vertex{W - 37, 1});
    // edges are carried by label
    for (auto [i, j] : B.edges()) CHECK(Bt.is_adjacent(B.vertex(i), B.vertex(j)));
    CHECK(Bt.edge_count() == B.edge_count());
    CHECK(shift_rows(B, {W, W, W}) == B);
    CHECK(shift_rows(shift_rows(B, {0, 37, 0}), {0, W - 37, 0}) == B);
}

TEST_CASE("boundary constants") {
    auto pr = build_k3_pair(3, Variant::reduced_k3, true, true);
    REQUIRE(pr.A.constants().size() == 6);
    auto labels = boundary_constant_labels(pr.P);
    REQUIRE(labels.size() == 6);
    // row 1: W - tr(1) = 27 and 26
    CHECK(labels[2] == Vertex{27, 1});
    CHECK(labels[3] == Vertex{26, 1});
    CHECK(labels[0] == Vertex{0, 0});
    CHECK(labels[1] == Vertex{31, 0});
    for (size_t c = 0; c < 6; ++c) CHECK(pr.A.vertex(pr.A.constants()[c]) == labels[c]);
    // the constants are the two ends of each shifted row
    CHECK(pr.A.constants()[2] == 32);
    CHECK(pr.A.constants()[3] == 63);
    IndexMap id;
    for (size_t c : pr.A.constants()) id.emplace_back(c, c);
    CHECK(partial_isomorphism_idx(pr.A, pr.A, id));
}

TEST_CASE("constants only make Spoiler stronger") {
    auto plus = build_k3_pair(3, Variant::reduced_k3, true, true);
    auto plain = build_k3_pair(3, Variant::reduced_k3, true, false);
    for (int r = 1; r <= 3; ++r) {
        bool wp = solve(plus.A, plus.B, {2, r}).duplicator_wins;
        bool w = solve(plain.A, plain.B, {2, r}).duplicator_wins;
        if (wp) CHECK(w);
    }
}

TEST_CASE("full and reduced sizes") {
    auto f = build_k3_pair(3, Variant::full_k3, true, false);
    CHECK(f.A.size() == 3 * 384);
    auto r4 = build_k3_pair(4, Variant::reduced_k3, false, false);
    auto f3 = build_k3_pair(3, Variant::full_k3, false, false);
    CHECK(r4.P.gamma_star == f3.P.gamma_star);
    CHECK(r4.B.edge_count() == f3.B.edge_count());
}
