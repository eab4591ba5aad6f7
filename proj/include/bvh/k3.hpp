#pragma once

#include "bvh/abstraction.hpp"
#include "bvh/structure.hpp"

namespace bvh {

struct K3BuildSpec {
    int m = 3;
    Variant variant = Variant::reduced_k3;
    bool shifted = false;
    bool boundary_constants = false;
    bool critical_edge = false;  // true gives the A side
};

AbstractionParams k3_params(const K3BuildSpec& spec);

// Rows 0..2 of width W, ordered by (y, x). Vertex (x, y) sits at index y*W + x.
OrderedStructure build_b3m_prime(const K3BuildSpec& spec);
// Deletes the omega edges; the input must still be in unshifted order.
OrderedStructure apply_omega_deletions(const OrderedStructure& bprime, const AbstractionParams& P);
OrderedStructure add_critical_edge(const OrderedStructure& B, const AbstractionParams& P);
// Moves row i right by amounts[i] positions (cyclically); labels are kept.
OrderedStructure shift_rows(const OrderedStructure& S, const std::vector<BigInt>& amounts);
OrderedStructure circular_shift(const OrderedStructure& S, const AbstractionParams& P);
OrderedStructure add_boundary_constants(const OrderedStructure& S, const AbstractionParams& P);

// Full pipeline for one side.
OrderedStructure build_k3(const K3BuildSpec& spec);

struct K3Pair {
    AbstractionParams P;
    OrderedStructure A, B;
};
K3Pair build_k3_pair(int m, Variant variant, bool shifted, bool constants);

// Labels of the six boundary constants, row by row: (W - tr(b)) mod W and W - tr(b) - 1.
std::vector<Vertex> boundary_constant_labels(const AbstractionParams& P);

// Pure B' rule on labels.
bool k3_prime_rule(const AbstractionParams& P, int64_t x1, int y1, int64_t x2, int y2);

}  // namespace bvh
