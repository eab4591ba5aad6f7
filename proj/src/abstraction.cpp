#include "bvh/abstraction.hpp"

namespace bvh {

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::full_k3: return "full";
        case Variant::reduced_k3: return "reduced";
        case Variant::general: return "general";
    }
    return "?";
}

Variant parse_variant(const std::string& s) {
    if (s == "full" || s == "full-k3") return Variant::full_k3;
    if (s == "reduced" || s == "reduced-k3") return Variant::reduced_k3;
    if (s == "general") return Variant::general;
    throw std::invalid_argument("unknown variant: " + s);
}

static BigInt exact_div(const BigInt& a, const BigInt& b, const char* what) {
    if (b == 0 || a % b != 0) throw InvariantError(std::string("non-exact quotient in ") + what);
    return a / b;
}

AbstractionParams AbstractionParams::make(int k, int m, Variant v, std::optional<ToyFactors> toy) {
    if (m < 3) throw DomainError("m must be at least 3");
    AbstractionParams P;
    P.k = k;
    P.m = m;
    P.variant = v;
    P.toy = toy;
    if (v != Variant::general) {
        if (k != 3) throw DomainError("k=3 variants require k = 3");
        if (toy) throw DomainError("toy factors apply to the general variant only");
        int T = P.top();
        P.gamma_star.assign(T + 1, 0);
        int shift = v == Variant::reduced_k3 ? 1 : 0;
        P.gamma_star[0] = 4 * (m - shift);
        for (int i = 1; i <= T; ++i) P.gamma_star[i] = 4 * (m - i - shift) * P.gamma_star[i - 1];
        P.u_star.assign(m + 1, 1);
        P.u_star[0] = 0;
        P.eta_star.assign(m, 0);
        P.cl_star.assign(m + 1, 0);
        P.finish();
        return P;
    }
    if (k < 4) throw DomainError("general variant requires k >= 4");
    BigInt ufac = toy ? toy->u_factor : BigInt(3) * pow_big(2, static_cast<unsigned>(P.choose_c()));
    if (toy) {
        if (toy->u_factor <= 0 || toy->u_factor % 6 != 0)
            throw DomainError("toy u_factor must be a positive multiple of 6");
        if (toy->g_factor <= 0 || toy->g_factor % 2 != 0)
            throw DomainError("toy g_factor must be a positive even number");
    }
    auto gfac = [&](int e) -> BigInt {
        return toy ? toy->g_factor : pow_big(2, static_cast<unsigned>(e));
    };
    P.gamma_star.assign(m, 0);
    P.u_star.assign(m + 1, 0);
    P.eta_star.assign(m, 0);
    P.cl_star.assign(m + 1, 0);
    P.u_star[m] = k - 1;
    P.gamma_star[0] = gfac(m) * P.u_star[m];
    for (int i = 1; i <= m - 1; ++i) {
        // level l = m - i needs cl*_{l+1}, which depends on gamma*_{i-1}
        int l = m - i;
        BigInt w = BigInt(k) * P.gamma_star[i - 1];
        BigInt cl = 2 * w;
        BigInt pw = 1;
        for (int j = 1; j <= k - 2; ++j) {
            pw *= w;
            cl += pw;
        }
        P.cl_star[l + 1] = cl;
        P.eta_star[l] = BigInt(k - 1) * cl;
        P.u_star[l] = ufac * P.eta_star[l];
        P.gamma_star[i] = gfac(m - i) * P.u_star[l] * P.gamma_star[i - 1];
    }
    BigInt base = BigInt(k) * P.gamma_star[m - 1] + 1;
    P.bh_count = BigInt(m) * pow_big(base, static_cast<unsigned>(k - 1));
    P.gamma.assign(m, 0);
    for (int i = 0; i < m; ++i) P.gamma[i] = BigInt(m) * P.bh_count * P.gamma_star[i];
    P.finish();
    return P;
}

void AbstractionParams::finish() {
    int T = top();
    unit_.assign(m + 1, 0);
    off_.assign(m + 1, 0);
    for (int i = lo(); i <= m; ++i) unit_[i] = exact_div(gamma_star[T], gamma_star[m - i], "beta");
    BigInt sum = 0;
    for (int i = lo(); i <= m; ++i) {
        if (i > lo()) sum += unit_[i];
        off_[i] = exact_div(sum, 2, "half-sum");
    }
    fits64_ = fits_i64(gamma_star[T] * 4);
    if (fits64_) {
        width64_ = to_i64(gamma_star[T]);
        unit64_.assign(m + 1, 0);
        off64_.assign(m + 1, 0);
        for (int i = lo(); i <= m; ++i) {
            unit64_[i] = to_i64(unit_[i]);
            off64_[i] = to_i64(off_[i]);
        }
    }
}

void AbstractionParams::check_level(int i) const {
    if (i < lo() || i > m) throw DomainError("abstraction level out of range: " + std::to_string(i));
}

void AbstractionParams::check_x(const BigInt& x) const {
    if (x < 0 || x >= width()) throw DomainError("coordinate out of range: " + x.str());
}

BigInt AbstractionParams::beta(int j, int i) const {
    check_level(i);
    check_level(j);
    if (i > j) throw DomainError("beta requires i <= j");
    return exact_div(gamma_star[m - i], gamma_star[m - j], "beta");
}

const BigInt& AbstractionParams::unit(int i) const {
    check_level(i);
    return unit_[i];
}

const BigInt& AbstractionParams::offset(int i) const {
    check_level(i);
    return off_[i];
}

BigInt AbstractionParams::floor_abs(const BigInt& x, int i) const {
    check_level(i);
    check_x(x);
    return x / unit_[i];
}

BigInt AbstractionParams::proj(const BigInt& x, int i) const {
    check_level(i);
    check_x(x);
    return (x / unit_[i]) * unit_[i] + off_[i];
}

int AbstractionParams::idx(const BigInt& x) const {
    check_x(x);
    for (int i = m; i > lo(); --i)
        if ((x / unit_[i]) * unit_[i] + off_[i] == x) return i;
    return lo();
}

int AbstractionParams::idx64(int64_t x) const {
    for (int i = m; i > lo(); --i)
        if (proj64(x, i) == x) return i;
    return lo();
}

int AbstractionParams::cc(const BigInt& x, int y, int i) const {
    BigInt v = (floor_abs(x, i) + y) % (k - 1);
    return v.convert_to<int>();
}

BigInt AbstractionParams::tuple_min(const BigInt& x, int p) const {
    BigInt f = floor_abs(x, p);
    return (f / u_star[p]) * u_star[p];
}

BigInt AbstractionParams::tr(int row) const {
    if (row < 0 || row >= k) throw DomainError("row out of range");
    BigInt s = 0;
    for (int p = lo(); p <= m; ++p) s += unit_[p];
    return BigInt(row % (k - 1)) * s;
}

BigInt AbstractionParams::mid() const { return width() / 2 + off_[m]; }

BigInt AbstractionParams::x_flat(const BigInt& x) const {
    if (x < 0) throw DomainError("negative coordinate");
    return x % (width() * k);
}

}  // namespace bvh
