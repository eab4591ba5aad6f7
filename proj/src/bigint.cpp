#include "bvh/bigint.hpp"

#include <cctype>
#include <limits>

namespace bvh {

std::string to_dec(const BigInt& v) { return v.str(); }

BigInt from_dec(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("not a decimal integer: " + s);
    return BigInt(s);
}

bool fits_i64(const BigInt& v) {
    return v >= std::numeric_limits<int64_t>::min() && v <= std::numeric_limits<int64_t>::max();
}

int64_t to_i64(const BigInt& v) {
    if (!fits_i64(v)) throw std::overflow_error("integer does not fit in 64 bits: " + v.str());
    return v.convert_to<int64_t>();
}

BigInt random_below(std::mt19937_64& rng, const BigInt& bound) {
    if (bound <= 0) throw std::invalid_argument("random_below: bound must be positive");
    if (bound == 1) return 0;
    // rejection sampling on whole 64-bit limbs
    unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(bound - 1)) + 1;
    unsigned limbs = (bits + 63) / 64;
    unsigned top = bits - 64 * (limbs - 1);
    uint64_t top_mask = top == 64 ? ~uint64_t{0} : ((uint64_t{1} << top) - 1);
    for (;;) {
        BigInt r = 0;
        for (unsigned i = 0; i < limbs; ++i) {
            uint64_t w = rng();
            if (i == 0) w &= top_mask;
            r <<= 64;
            r += w;
        }
        if (r < bound) return r;
    }
}

BigInt pow_big(const BigInt& base, unsigned exp) { return boost::multiprecision::pow(base, exp); }

}  // namespace bvh
