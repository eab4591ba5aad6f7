#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace bvh {

using BigInt = boost::multiprecision::cpp_int;

std::string to_dec(const BigInt& v);
BigInt from_dec(const std::string& s);

// Throws std::overflow_error when v does not fit.
int64_t to_i64(const BigInt& v);
bool fits_i64(const BigInt& v);

// Uniform value in [0, bound). bound must be positive.
BigInt random_below(std::mt19937_64& rng, const BigInt& bound);

BigInt pow_big(const BigInt& base, unsigned exp);

}  // namespace bvh
