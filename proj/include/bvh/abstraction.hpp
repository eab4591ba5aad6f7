#pragma once

#include "bvh/bigint.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bvh {

enum class Variant { full_k3, reduced_k3, general };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& s);  // "full" | "reduced" | "general"

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

// Replacement factors for the general variant so that widths stay small.
// u_factor stands in for 3*2^C(k-2,2) in the U* recurrence, g_factor for
// every power of two in the gamma* recurrence.
struct ToyFactors {
    BigInt u_factor = 6;
    BigInt g_factor = 2;
};

class AbstractionParams {
public:
    static AbstractionParams make(int k, int m, Variant v, std::optional<ToyFactors> toy = std::nullopt);

    int k = 3;
    int m = 3;
    Variant variant = Variant::full_k3;
    std::optional<ToyFactors> toy;

    // Tables are indexed by the usual subscripts; unused slots hold 0.
    std::vector<BigInt> gamma_star;  // 0..top()
    std::vector<BigInt> u_star;      // 1..m
    std::vector<BigInt> eta_star;    // 1..m-1
    std::vector<BigInt> cl_star;     // 2..m
    BigInt bh_count;                 // general only
    std::vector<BigInt> gamma;       // general only, 0..m-1

    int top() const { return variant == Variant::reduced_k3 ? m - 2 : m - 1; }
    int lo() const { return variant == Variant::reduced_k3 ? 2 : 1; }
    bool is_k3() const { return variant != Variant::general; }
    int choose_c() const { return (k - 2) * (k - 3) / 2; }  // C(k-2,2)

    const BigInt& width() const { return gamma_star[top()]; }

    // beta_{m-j}^{m-i} = gamma*_{m-i} / gamma*_{m-j}, lo <= i <= j <= m
    BigInt beta(int j, int i) const;
    // divisor of the i-th abstraction, i.e. beta_{m-i}^{top}
    const BigInt& unit(int i) const;
    // the half-sum added by proj at level i
    const BigInt& offset(int i) const;

    BigInt floor_abs(const BigInt& x, int i) const;  // [x]_i
    BigInt proj(const BigInt& x, int i) const;       // <x>_i
    int idx(const BigInt& x) const;
    int cc(const BigInt& x, int y, int i) const;
    BigInt tuple_min(const BigInt& x, int p) const;  // level-p coordinate of the tuple start
    BigInt tr(int row) const;
    BigInt mid() const;
    BigInt x_flat(const BigInt& x) const;  // x mod (gamma*_{m-1} * k)

    // 64-bit fast path, valid when fits64() (all k=3 desk instances)
    bool fits64() const { return fits64_; }
    int64_t width64() const { return width64_; }
    int64_t floor64(int64_t x, int i) const { return x / unit64_[i]; }
    int64_t proj64(int64_t x, int i) const { return (x / unit64_[i]) * unit64_[i] + off64_[i]; }
    int idx64(int64_t x) const;
    int cc64(int64_t x, int y, int i) const {
        return static_cast<int>((x / unit64_[i] + y) % (k - 1));
    }
    int64_t unit64(int i) const { return unit64_[i]; }
    int64_t off64(int i) const { return off64_[i]; }

    void check_level(int i) const;
    void check_x(const BigInt& x) const;

private:
    std::vector<BigInt> unit_;
    std::vector<BigInt> off_;
    bool fits64_ = false;
    int64_t width64_ = 0;
    std::vector<int64_t> unit64_, off64_;
    void finish();
};

}  // namespace bvh
