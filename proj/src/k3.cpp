#include "bvh/k3.hpp"

#include <algorithm>

namespace bvh {

AbstractionParams k3_params(const K3BuildSpec& spec) {
    if (spec.variant == Variant::general) throw DomainError("k=3 builder needs the full or reduced variant");
    return AbstractionParams::make(3, spec.m, spec.variant);
}

bool k3_prime_rule(const AbstractionParams& P, int64_t x1, int y1, int64_t x2, int y2) {
    if (y1 == y2) return false;
    int l = std::min(P.idx64(x1), P.idx64(x2));
    return P.cc64(x1, y1, l) != P.cc64(x2, y2, l);
}

static std::vector<Vertex> row_major(int64_t W) {
    std::vector<Vertex> vs;
    vs.reserve(3 * W);
    for (int y = 0; y < 3; ++y)
        for (int64_t x = 0; x < W; ++x) vs.push_back({x, y});
    return vs;
}

OrderedStructure build_b3m_prime(const K3BuildSpec& spec) {
    AbstractionParams P = k3_params(spec);
    if (!P.fits64()) throw UnsupportedError("k=3 width too large to materialize");
    int64_t W = P.width64();
    std::vector<int> id(W);
    for (int64_t x = 0; x < W; ++x) id[x] = P.idx64(x);
    std::vector<std::pair<size_t, size_t>> es;
    for (int y1 = 0; y1 < 3; ++y1)
        for (int y2 = y1 + 1; y2 < 3; ++y2)
            for (int64_t a = 0; a < W; ++a)
                for (int64_t b = 0; b < W; ++b) {
                    int l = std::min(id[a], id[b]);
                    if (P.cc64(a, y1, l) != P.cc64(b, y2, l)) es.emplace_back(y1 * W + a, y2 * W + b);
                }
    return OrderedStructure::make_explicit(3, spec.m, variant_name(spec.variant), P.width(), row_major(W), es);
}

OrderedStructure apply_omega_deletions(const OrderedStructure& bprime, const AbstractionParams& P) {
    int64_t W = P.width64();
    auto at = [&](int64_t x, int y) { return static_cast<size_t>(y * W + x); };
    OrderedStructure S = bprime;
    // fixpoint from the highest abstraction down: deletions made for index l
    // only touch edges whose lower endpoint has index l, so the level-(l+1)
    // adjacency consulted below is already final
    for (int l = P.m - 1; l >= P.lo(); --l) {
        std::vector<std::pair<size_t, size_t>> gone;
        for (int64_t x = 0; x < W; ++x) {
            if (P.idx64(x) != l || P.floor64(x, l) % 2 != 0) continue;
            int64_t px = P.proj64(x, l + 1);
            for (int v = 0; v < 3; ++v) {
                if (v == 1) continue;
                for (int64_t u = 0; u < W; ++u) {
                    if (P.idx64(u) < l + 1) continue;
                    if (!S.adj(at(u, v), at(px, 1))) gone.emplace_back(at(x, 1), at(u, v));
                }
            }
        }
        S = S.with_edges(gone, false);
    }
    return S;
}

OrderedStructure add_critical_edge(const OrderedStructure& B, const AbstractionParams& P) {
    BigInt mid = P.mid();
    auto a = B.index_of({mid, 0});
    auto b = B.index_of({mid, 2});
    if (!a || !b) throw InvariantError("critical points missing");
    return B.with_edge(*a, *b, true);
}

OrderedStructure shift_rows(const OrderedStructure& S, const std::vector<BigInt>& amounts) {
    // group current indices by row, keeping relative order as positions
    std::vector<std::vector<size_t>> rows(S.k());
    for (size_t i = 0; i < S.size(); ++i) {
        int y = S.vertex(i).y;
        if (y < 0 || y >= S.k()) throw DomainError("row out of range");
        rows[y].push_back(i);
    }
    std::vector<size_t> order;
    order.reserve(S.size());
    for (int y = 0; y < S.k(); ++y) {
        size_t n = rows[y].size();
        if (n == 0) continue;
        size_t s = static_cast<size_t>(((y < static_cast<int>(amounts.size()) ? amounts[y] : BigInt(0)) % n)
                                           .convert_to<unsigned long long>());
        std::vector<size_t> placed(n);
        for (size_t p = 0; p < n; ++p) placed[(p + s) % n] = rows[y][p];
        order.insert(order.end(), placed.begin(), placed.end());
    }
    return S.reordered(order);
}

OrderedStructure circular_shift(const OrderedStructure& S, const AbstractionParams& P) {
    std::vector<BigInt> amt;
    for (int y = 0; y < 3; ++y) amt.push_back(P.tr(y));
    return shift_rows(S, amt);
}

std::vector<Vertex> boundary_constant_labels(const AbstractionParams& P) {
    std::vector<Vertex> out;
    const BigInt& W = P.width();
    for (int b = 0; b < 3; ++b) {
        BigInt t = P.tr(b) % W;
        out.push_back({(W - t) % W, b});
        out.push_back({(W - t - 1 + W) % W, b});
    }
    return out;
}

OrderedStructure add_boundary_constants(const OrderedStructure& S, const AbstractionParams& P) {
    std::vector<size_t> cs;
    for (auto& v : boundary_constant_labels(P)) {
        auto i = S.index_of(v);
        if (!i) throw InvariantError("boundary constant missing: " + vertex_str(v));
        cs.push_back(*i);
    }
    return S.with_constants(cs);
}

OrderedStructure build_k3(const K3BuildSpec& spec) {
    AbstractionParams P = k3_params(spec);
    OrderedStructure S = apply_omega_deletions(build_b3m_prime(spec), P);
    if (spec.critical_edge) S = add_critical_edge(S, P);
    if (spec.shifted) S = circular_shift(S, P);
    if (spec.boundary_constants) S = add_boundary_constants(S, P);
    return S;
}

K3Pair build_k3_pair(int m, Variant variant, bool shifted, bool constants) {
    K3BuildSpec spec{m, variant, shifted, constants, false};
    AbstractionParams P = k3_params(spec);
    OrderedStructure B = apply_omega_deletions(build_b3m_prime(spec), P);
    OrderedStructure A = add_critical_edge(B, P);
    if (shifted) {
        A = circular_shift(A, P);
        B = circular_shift(B, P);
    }
    if (constants) {
        A = add_boundary_constants(A, P);
        B = add_boundary_constants(B, P);
    }
    return {P, std::move(A), std::move(B)};
}

}  // namespace bvh
