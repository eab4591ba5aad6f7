#include "bvh/lemma_suite.hpp"

#include "bvh/bigint.hpp"

#include <random>
#include <sstream>

namespace bvh {

std::vector<AbstractionParams> lemma_suite_params() {
    std::vector<AbstractionParams> out;
    for (int m = 3; m <= 5; ++m) {
        out.push_back(AbstractionParams::make(3, m, Variant::full_k3));
        out.push_back(AbstractionParams::make(3, m, Variant::reduced_k3));
    }
    for (int k = 4; k <= 5; ++k)
        for (int m = 3; m <= 5; ++m) out.push_back(AbstractionParams::make(k, m, Variant::general, ToyFactors{}));
    return out;
}

namespace {

std::string tag(const AbstractionParams& P) {
    std::ostringstream s;
    s << variant_name(P.variant) << " k=" << P.k << " m=" << P.m;
    return s.str();
}

struct Rig {
    std::mt19937_64 rng;
    const std::vector<AbstractionParams>& all;
    std::vector<const AbstractionParams*> pool;

    Rig(uint64_t seed, const std::vector<AbstractionParams>& ps, bool k3_only) : rng(seed), all(ps) {
        for (auto& P : all)
            if (!k3_only || P.is_k3()) pool.push_back(&P);
    }
    const AbstractionParams& pick() { return *pool[rng() % pool.size()]; }
    int level(int lo, int hi) {  // uniform in [lo, hi]
        return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
    }
    BigInt any(const AbstractionParams& P) { return random_below(rng, P.width()); }
    // random member of X*_i
    BigInt point(const AbstractionParams& P, int i) {
        BigInt n = random_below(rng, P.width() / P.unit(i));
        return n * P.unit(i) + P.offset(i);
    }
    // random x with idx(x) == r exactly
    BigInt exact(const AbstractionParams& P, int r) {
        for (;;) {
            BigInt x = point(P, r);
            if (P.idx(x) == r) return x;
        }
    }
};

struct Tally {
    LemmaCheck& out;
    void fail(const AbstractionParams& P, const std::string& what) {
        if (out.failures++ == 0) out.first_failure = tag(P) + ": " + what;
    }
};

BigInt mod_pos(const BigInt& a, const BigInt& b) {
    BigInt r = a % b;
    if (r < 0) r += b;
    return r;
}


// ⟨x⟩_i is the only member of X*_i in the i-cell of x
void projection_uniqueness(Rig& g, LemmaCheck& c) {
    auto& P = g.pick();
    int i = g.level(P.lo(), P.m);
    BigInt x = g.any(P);
    BigInt px = P.proj(x, i);
    BigInt start = P.floor_abs(x, i) * P.unit(i);
    std::vector<BigInt> cand;
    if (P.unit(i) <= 256) {
        for (BigInt z = start; z < start + P.unit(i); ++z) cand.push_back(z);
    } else {
        for (int s = 0; s < 16; ++s) cand.push_back(start + random_below(g.rng, P.unit(i)));
        if (i > P.lo())
            for (int d = -3; d <= 3; ++d) {
                BigInt z = px + BigInt(d) * P.unit(i - 1);
                if (z >= start && z < start + P.unit(i)) cand.push_back(z);
            }
        cand.push_back(px);
    }
    ++c.cases;
    for (auto& z : cand) {
        if (P.proj(z, i) != z || P.floor_abs(z, i) != P.floor_abs(x, i)) continue;
        if (z != px) {
            Tally{c}.fail(P, "x=" + to_dec(x) + " i=" + std::to_string(i) + " second member " + to_dec(z));
            return;
        }
    }
}

void subsumption(Rig& g, LemmaCheck& c) {
    auto& P = g.pick();
    int i = g.level(P.lo(), P.m);
    BigInt x = g.point(P, i);
    ++c.cases;
    for (int j = P.lo(); j <= i; ++j)
        if (P.proj(x, j) != x) {
            Tally{c}.fail(P, "x=" + to_dec(x) + " i=" + std::to_string(i) + " j=" + std::to_string(j));
            return;
        }
}

void composition(Rig& g, LemmaCheck& c) {
    auto& P = g.pick();
    int i = g.level(P.lo(), P.m);
    int j = g.level(i, P.m);
    BigInt x = g.any(P);
    BigInt px = P.proj(x, i);
    ++c.cases;
    if (P.floor_abs(px, j) != P.floor_abs(x, j) || P.proj(px, j) != P.proj(x, j))
        Tally{c}.fail(P, "x=" + to_dec(x) + " i=" + std::to_string(i) + " j=" + std::to_string(j));
}

void projection_index(Rig& g, LemmaCheck& c) {
    auto& P = g.pick();
    int i = g.level(P.lo(), P.m);
    BigInt x = g.any(P);
    ++c.cases;
    if (P.idx(P.proj(x, i)) < i) Tally{c}.fail(P, "x=" + to_dec(x) + " i=" + std::to_string(i));
}

// For idx(x) = i > lo: beta-1 points of index i-1 project to x, they and x
// are consecutive in X*_{i-1} with x in the middle, and unit(i)-1 points of
// index below i project to x.
void surrounding_counts(Rig& g, LemmaCheck& c) {
    auto& P = g.pick();
    int i = g.level(P.lo() + 1, P.m);
    BigInt x = g.exact(P, i);
    BigInt beta = P.unit(i) / P.unit(i - 1);
    BigInt cell = P.floor_abs(x, i);
    BigInt first = cell * beta, last = first + beta;  // level-(i-1) ordinals [first, last)
    BigInt t = P.floor_abs(x, i - 1);
    ++c.cases;
    auto bad = [&](const std::string& w) { Tally{c}.fail(P, "x=" + to_dec(x) + " i=" + std::to_string(i) + " " + w); };
    BigInt left = t - first, right = last - 1 - t;
    if (t < first || t >= last || left - right > 1 || right - left > 1) return bad("not centred");
    if (P.fits64() && P.unit(i) <= 4096) {
        int64_t s = to_i64(cell * P.unit(i)), u = to_i64(P.unit(i)), xi = to_i64(x);
        int64_t below = 0, exact = 0, lo_ord = -1, hi_ord = -1;
        for (int64_t z = s; z < s + u; ++z) {
            if (P.proj64(z, i) != xi) return bad("cell member " + std::to_string(z) + " projects elsewhere");
            int d = P.idx64(z);
            if (z != xi) {
                if (d >= i) return bad("second point of index >= i");
                ++below;
            }
            if (d == i - 1 || z == xi) {
                if (d == i - 1) ++exact;
                int64_t o = P.floor64(z, i - 1);
                if (lo_ord < 0) lo_ord = o;
                else if (o != hi_ord + 1) return bad("gap in X*_{i-1}");
                hi_ord = o;
            }
        }
        if (s > 0 && P.proj64(s - 1, i) == xi) return bad("interval extends left");
        if (s + u < P.width64() && P.proj64(s + u, i) == xi) return bad("interval extends right");
        if (below != u - 1) return bad("index<i count " + std::to_string(below));
        if (BigInt(exact) != beta - 1) return bad("index i-1 count " + std::to_string(exact));
        return;
    }
    // sampled: both ends, random inner ordinals and the two outside neighbours
    std::vector<BigInt> ords{first, last - 1};
    for (int s = 0; s < 8; ++s) ords.push_back(first + random_below(g.rng, beta));
    for (auto& o : ords) {
        BigInt z = o * P.unit(i - 1) + P.offset(i - 1);
        if (P.proj(z, i) != x) return bad("ordinal " + to_dec(o) + " projects elsewhere");
        if (z != x && P.idx(z) != i - 1) return bad("ordinal " + to_dec(o) + " has wrong index");
    }
    for (BigInt o : std::vector<BigInt>{first - 1, last}) {
        if (o < 0) continue;
        BigInt z = o * P.unit(i - 1) + P.offset(i - 1);
        if (z >= P.width()) continue;
        if (P.proj(z, i) == x) return bad("outside ordinal " + to_dec(o) + " projects to x");
    }
}

void unit_distance(Rig& g, LemmaCheck& c) {
    auto& P = g.pick();
    int i = g.level(P.lo(), P.m);
    BigInt a = P.proj(g.any(P), i), b = P.proj(g.any(P), i);
    if (P.idx(a) < i || P.idx(b) < i) {
        ++c.vacuous;
        return;
    }
    ++c.cases;
    if (mod_pos(a - b, P.unit(i)) != 0) Tally{c}.fail(P, to_dec(a) + " vs " + to_dec(b));
}

void residue_propagation(Rig& g, LemmaCheck& c) {
    auto& P = g.pick();
    int xi = g.level(P.lo() + 1, P.m);
    BigInt a = g.any(P);
    BigInt res = a - P.proj(a, xi);
    BigInt a2 = g.point(P, xi) + res;
    if (a2 < 0 || a2 >= P.width() || a2 - P.proj(a2, xi) != res) {
        ++c.vacuous;
        return;
    }
    ++c.cases;
    bool ok = a - P.proj(a, xi - 1) == a2 - P.proj(a2, xi - 1) &&
              P.proj(a, xi) - P.proj(a, xi - 1) == P.proj(a2, xi) - P.proj(a2, xi - 1);
    if (!ok) Tally{c}.fail(P, "a=" + to_dec(a) + " a'=" + to_dec(a2) + " xi=" + std::to_string(xi));
}

void order_propagation(Rig& g, LemmaCheck& c) {
    auto& P = g.pick();
    int i = g.level(P.lo() + 1, P.m);
    BigInt x1 = g.any(P);
    BigInt x2 = (g.rng() & 1) ? g.any(P) : x1 + random_below(g.rng, P.unit(i) * 3);
    if (x2 >= P.width() || P.floor_abs(x1, i) >= P.floor_abs(x2, i)) {
        ++c.vacuous;
        return;
    }
    ++c.cases;
    if (!(P.floor_abs(x1, i - 1) < P.floor_abs(x2, i - 1)) || !(x1 < x2))
        Tally{c}.fail(P, to_dec(x1) + " vs " + to_dec(x2) + " i=" + std::to_string(i));
}

BigInt boundary(const AbstractionParams& P, int row) { return mod_pos(P.width() - P.tr(row), P.width()); }

void boundary_cc(Rig& g, LemmaCheck& c) {
    auto& P = g.pick();
    int row = static_cast<int>(g.rng() % 3);
    int i = g.level(P.lo(), P.m);
    BigInt x = boundary(P, row);
    ++c.cases;
    int v = P.cc(x, row, i);
    if (v != 0)
        Tally{c}.fail(P, "row " + std::to_string(row) + " i=" + std::to_string(i) + " x=" + to_dec(x) +
                             " [x]_i=" + to_dec(P.floor_abs(x, i)) + " cc=" + std::to_string(v));
}

void boundary_index(Rig& g, LemmaCheck& c) {
    auto& P = g.pick();
    int row = static_cast<int>(g.rng() % 3);
    int i = g.level(P.lo(), P.m);
    BigInt x = boundary(P, row);
    ++c.cases;
    int d = P.idx(P.proj(x, i));
    if (d != i)
        Tally{c}.fail(P, "row " + std::to_string(row) + " i=" + std::to_string(i) + " idx=" + std::to_string(d));
}

void conquer_boundary(Rig& g, LemmaCheck& c) {
    auto& P = g.pick();
    int p = g.level(P.lo(), P.m);
    BigInt x = g.any(P);
    BigInt res = x - P.proj(x, p);
    for (int tries = 0; tries < 8; ++tries) {
        BigInt x2 = g.point(P, p) + res;
        if (x2 < 0 || x2 >= P.width() || x2 - P.proj(x2, p) != res) continue;
        BigInt px = P.proj(x, p), px2 = P.proj(x2, p);
        int qmax = std::min(P.idx(px), P.idx(px2));
        if (qmax < P.lo()) continue;
        int q = g.level(P.lo(), qmax);
        if (mod_pos(P.floor_abs(px, q) - P.floor_abs(px2, q), P.k - 1) != 0) continue;
        ++c.cases;
        for (int i = P.lo(); i <= q; ++i)
            for (int j = P.lo(); j <= p; ++j)
                if (mod_pos(P.floor_abs(P.proj(x, j), i) - P.floor_abs(P.proj(x2, j), i), P.k - 1) != 0) {
                    Tally{c}.fail(P, "x=" + to_dec(x) + " x'=" + to_dec(x2) + " p=" + std::to_string(p) +
                                         " q=" + std::to_string(q) + " i=" + std::to_string(i) +
                                         " j=" + std::to_string(j));
                    return;
                }
        return;
    }
    ++c.vacuous;
}

// distance from the tuple start to the level-i projection, counted at level r
BigInt tuple_gap(const AbstractionParams& P, const BigInt& x, int r, int i) {
    return P.tuple_min(x, r) - P.floor_abs(P.proj(x, i), r);
}

struct CopyPair {
    const AbstractionParams* P;
    int r, xi;
    BigInt x, x2;
    BigInt beta;  // beta_{m-xi}^{m-r}
};

// draws x, x' of index exactly r meeting the common copycat premise
bool copy_pair(Rig& g, CopyPair& cp, int min_gap) {
    auto& P = g.pick();
    if (P.m - P.lo() < min_gap) return false;
    cp.P = &P;
    cp.r = g.level(P.lo(), P.m - min_gap);
    cp.xi = g.level(cp.r + min_gap, P.m);
    cp.x = g.exact(P, cp.r);
    cp.beta = P.unit(cp.xi) / P.unit(cp.r);
    if (g.rng() % 5 < 2) {
        cp.x2 = g.exact(P, cp.r);
    } else {
        // move to another xi-cell, then to another member of the tuple
        BigInt cells = P.width() / P.unit(cp.xi);
        BigInt y = cp.x + (random_below(g.rng, cells) - P.floor_abs(cp.x, cp.xi)) * P.unit(cp.xi);
        BigInt ord = P.tuple_min(y, cp.r) + random_below(g.rng, P.u_star[cp.r]);
        cp.x2 = ord * P.unit(cp.r) + P.offset(cp.r);
        if (cp.x2 >= P.width() || P.idx(cp.x2) != cp.r) return false;
    }
    return mod_pos(tuple_gap(P, cp.x, cp.r, cp.xi) - tuple_gap(P, cp.x2, cp.r, cp.xi), cp.beta) == 0;
}

std::string cp_str(const CopyPair& cp, int i) {
    return "x=" + to_dec(cp.x) + " x'=" + to_dec(cp.x2) + " r=" + std::to_string(cp.r) +
           " xi=" + std::to_string(cp.xi) + " i=" + std::to_string(i);
}

void copycat(Rig& g, LemmaCheck& c) {
    CopyPair cp;
    if (!copy_pair(g, cp, 1)) {
        ++c.vacuous;
        return;
    }
    auto& P = *cp.P;
    ++c.cases;
    for (int i = cp.r + 1; i < cp.xi; ++i) {
        BigInt b = P.unit(cp.xi) / P.unit(i);
        if (mod_pos(P.floor_abs(cp.x, i) - P.floor_abs(cp.x2, i), b) != 0) {
            Tally{c}.fail(P, cp_str(cp, i));
            return;
        }
    }
}

void copycat_distance(Rig& g, LemmaCheck& c) {
    CopyPair cp;
    if (!copy_pair(g, cp, 2)) {
        ++c.vacuous;
        return;
    }
    auto& P = *cp.P;
    ++c.cases;
    for (int i = cp.r + 1; i < cp.xi; ++i)
        if (mod_pos(tuple_gap(P, cp.x, cp.r, i) - tuple_gap(P, cp.x2, cp.r, i), cp.beta) != 0) {
            Tally{c}.fail(P, cp_str(cp, i));
            return;
        }
}

void copycat_index(Rig& g, LemmaCheck& c) {
    CopyPair cp;
    if (!copy_pair(g, cp, 1) || mod_pos(tuple_gap(*cp.P, cp.x, cp.r, cp.xi), cp.beta) == 0) {
        ++c.vacuous;
        return;
    }
    auto& P = *cp.P;
    ++c.cases;
    for (int i = cp.r + 1; i < cp.xi; ++i) {
        int a = P.idx(P.proj(cp.x, i)), b = P.idx(P.proj(cp.x2, i));
        if (a < cp.xi && b < cp.xi && a != b) {
            Tally{c}.fail(P, cp_str(cp, i) + " idx " + std::to_string(a) + " vs " + std::to_string(b));
            return;
        }
    }
}

void projection_drift(Rig& g, LemmaCheck& c) {
    auto& P = g.pick();
    int r = g.level(P.lo(), P.m - 1);
    int xi = g.level(r + 1, P.m);
    BigInt x = g.any(P);
    BigInt d = P.floor_abs(P.proj(x, xi), r) - P.floor_abs(x, r);
    if (d < 0) d = -d;
    ++c.cases;
    if (d >= P.unit(xi) / P.unit(r))
        Tally{c}.fail(P, "x=" + to_dec(x) + " r=" + std::to_string(r) + " xi=" + std::to_string(xi));
}

struct Entry {
    const char* name;
    bool k3_only;
    void (*body)(Rig&, LemmaCheck&);
};

const std::vector<Entry>& entries() {
    static const std::vector<Entry> e = {
        {"projection-uniqueness", false, projection_uniqueness},
        {"subsumption", false, subsumption},
        {"composition", false, composition},
        {"projection-index", false, projection_index},
        {"surrounding-counts", false, surrounding_counts},
        {"unit-distance", false, unit_distance},
        {"residue-propagation", false, residue_propagation},
        {"order-propagation", false, order_propagation},
        {"boundary-cc", true, boundary_cc},
        {"boundary-index", true, boundary_index},
        {"conquer-boundary", true, conquer_boundary},
        {"copycat", false, copycat},
        {"copycat-distance", false, copycat_distance},
        {"copycat-index", false, copycat_index},
        {"projection-drift", false, projection_drift},
    };
    return e;
}

}  // namespace

std::vector<std::string> lemma_names() {
    std::vector<std::string> out;
    for (auto& e : entries()) out.push_back(e.name);
    return out;
}

LemmaCheck run_lemma(const std::string& name, int cases, uint64_t seed) {
    static const std::vector<AbstractionParams> params = lemma_suite_params();
    for (auto& e : entries()) {
        if (name != e.name) continue;
        Rig g(seed, params, e.k3_only);
        LemmaCheck c;
        c.name = name;
        // premises that rarely hold get a bounded number of extra draws
        uint64_t budget = static_cast<uint64_t>(cases) * 20;
        while (c.cases < static_cast<uint64_t>(cases) && c.cases + c.vacuous < budget) e.body(g, c);
        return c;
    }
    throw std::invalid_argument("unknown lemma " + name);
}

std::vector<LemmaCheck> run_lemma_suite(int cases_per_lemma, uint64_t seed) {
    std::vector<LemmaCheck> out;
    uint64_t s = seed;
    for (auto& n : lemma_names()) out.push_back(run_lemma(n, cases_per_lemma, s++));
    return out;
}

}  // namespace bvh
