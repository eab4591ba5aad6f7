#include "bvh/strategies.hpp"

#include <doctest.h>

#include <random>

using namespace bvh;

namespace {
const K3Pair& reduced() {
    static K3Pair p = build_k3_pair(3, Variant::reduced_k3, true, false);
    return p;
}
}  // namespace

TEST_CASE("opening rounds") {
    K3StrategyContext C(reduced());
    const int64_t mid = 18;
    auto st = DuplicatorStateK3::start(C);
    auto r1 = respond_k3(st, 0, mid, 0);
    CHECK(r1.x == mid);
    CHECK(r1.phase == "mimic");
    auto r2 = respond_k3(st, 0, mid, 2);
    CHECK(r2.phase == "icebreak");
    const auto& P = C.params();
    CHECK(P.idx64(r2.x) == P.m);
    CHECK(P.cc64(r2.x, 2, P.m) == 1);
    int64_t cell = P.floor64(r2.x, P.m);
    CHECK(cell != 0);
    CHECK(cell != to_i64(P.gamma_star[0]) - 1);
    CHECK_FALSE(st.mimicking);
    // the reply keeps the board a partial isomorphism
    CHECK(k3_condition_failures(st, &st.board.back(), 0).empty());
}

TEST_CASE("icebreak from the B side") {
    K3StrategyContext C(reduced());
    auto st = DuplicatorStateK3::start(C);
    respond_k3(st, 1, 18, 2);
    auto r = respond_k3(st, 1, 18, 0);
    CHECK(r.phase == "icebreak");
    CHECK(C.params().cc64(r.x, 0, 3) == 0);
    CHECK(r.x != 18);
    CHECK(k3_condition_failures(st, &st.board.back(), 1).empty());
}

TEST_CASE("repeating a pebbled vertex returns its partner") {
    K3StrategyContext C(reduced());
    auto st = DuplicatorStateK3::start(C);
    respond_k3(st, 0, 18, 0);
    auto r2 = respond_k3(st, 0, 18, 2);
    st.lift(0);
    size_t before = st.board.size();
    auto r3 = respond_k3(st, 0, 18, 2);
    CHECK(r3.phase == "repeat");
    CHECK(r3.x == r2.x);
    CHECK(st.board.size() == before);
    // and from the other side
    auto r4 = respond_k3(st, 1, r2.x, 2);
    CHECK(r4.x == 18);
}

TEST_CASE("no free pebble") {
    K3StrategyContext C(reduced());
    auto st = DuplicatorStateK3::start(C);
    respond_k3(st, 0, 3, 0);
    respond_k3(st, 0, 5, 1);
    CHECK_THROWS(respond_k3(st, 0, 7, 2));
    st.lift(0);
    CHECK_NOTHROW(respond_k3(st, 0, 7, 2));
}

TEST_CASE("trace lines") {
    K3StrategyContext C(reduced());
    auto st = DuplicatorStateK3::start(C);
    std::vector<std::string> tr;
    respond_k3(st, 0, 18, 0, &tr);
    respond_k3(st, 0, 18, 2, &tr);
    REQUIRE(tr.size() >= 4);
    CHECK(tr[0].find("round 1") != std::string::npos);
}

TEST_CASE("two-round sweep on the reduced pair") {
    ValidateOptions o;
    o.solver_fraction = 0.05;
    o.seed = 3;
    auto r = validate_strategy(reduced(), 2, o);
    CHECK(r.sequences > 0);
    CHECK(r.violations == 0);
    CHECK(r.solver_checks > 0);
    CHECK(r.solver_disagreements == 0);
}

TEST_CASE("the strategy is for two pebbles only") {
    ValidateOptions o;
    o.pebbles = 3;
    CHECK_THROWS_AS(validate_strategy(reduced(), 2, o), ConfigurationError);
}

TEST_CASE("boundary constants defeat the scripted reply") {
    auto plus = build_k3_pair(3, Variant::reduced_k3, true, true);
    auto r = validate_strategy(plus, 3);
    CHECK(r.violations > 0);
    CHECK(r.condition_failures[4] > 0);
    REQUIRE(!r.first_violations.empty());
}

TEST_CASE("random playouts on the reduced pairs") {
    for (int m = 3; m <= 4; ++m) {
        auto pr = build_k3_pair(m, Variant::reduced_k3, true, false);
        K3StrategyContext C(pr);
        std::mt19937_64 rng(17);
        const int64_t W = C.width();
        for (int game = 0; game < 3000; ++game) {
            auto st = DuplicatorStateK3::start(C);
            for (int round = 0; round < m; ++round) {
                if (st.board.size() == 2 || (!st.board.empty() && rng() % 3 == 0))
                    st.lift(rng() % st.board.size());
                int side = static_cast<int>(rng() % 2);
                int y = static_cast<int>(rng() % 3);
                int64_t x = (rng() % 4 == 0) ? to_i64(C.params().mid()) : static_cast<int64_t>(rng() % static_cast<uint64_t>(W));
                K3Reply rep;
                INFO("m " << m << " game " << game << " round " << round);
                REQUIRE_NOTHROW(rep = respond_k3(st, side, x, y));
                const K3Pebble* fresh = rep.phase == "repeat" ? nullptr : &st.board.back();
                CHECK(k3_condition_failures(st, fresh, side).empty());
            }
        }
    }
}

// Known gap: on the full shifted pair without constants the abstraction order
// is taken over labels while the structures order by shifted position, so a
// short line across the wrap leaves the scripted reply with no candidate.
// Duplicator still has an easy reply there.
TEST_CASE("full shifted pair: scripted reply gets stuck at the wrap") {
    auto full = build_k3_pair(3, Variant::full_k3, true, false);
    K3StrategyContext C(full);
    auto st = DuplicatorStateK3::start(C);
    respond_k3(st, 0, 191, 0);
    auto r = respond_k3(st, 1, 111, 1);
    CHECK(r.x == 367);
    st.lift(0);
    CHECK_THROWS_AS(respond_k3(st, 0, 246, 1), StrategyInvariantError);
    PebbleGameSolver S(full.A, full.B, 2);
    IndexMap pos{{C.index(0, 367, 1), C.index(1, 111, 1)}};
    CHECK_FALSE(play_step(S, pos, 1, -1, 0, C.index(0, 246, 1)).empty());
}
