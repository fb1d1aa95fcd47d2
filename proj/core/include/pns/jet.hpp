#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace pns {

/// Multi-index over (x, y, z, t).
struct MultiIndex {
    int x = 0, y = 0, z = 0, t = 0;

    constexpr int order() const noexcept { return x + y + z + t; }
    constexpr int operator[](int v) const noexcept { return v == 0 ? x : v == 1 ? y : v == 2 ? z : t; }
    friend constexpr bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

namespace jet_detail {

constexpr std::size_t binomial(int n, int k) {
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return r;
}

/// Number of multi-indices in four variables with total order <= K.
template <int K>
inline constexpr std::size_t kSize = binomial(K + 4, 4);

struct Triple {
    unsigned short a, b, out;
};

template <int K>
struct Tables {
    std::array<MultiIndex, kSize<K>> index;
    std::array<double, kSize<K>> factorial;  // alpha!
    std::array<short, 625> lookup;           // (x, y, z, t) with each <= 4 -> slot or -1
    std::vector<Triple> products;

    Tables() {
        lookup.fill(-1);
        std::size_t n = 0;
        for (int total = 0; total <= K; ++total)
            for (int x = total; x >= 0; --x)
                for (int y = total - x; y >= 0; --y)
                    for (int z = total - x - y; z >= 0; --z) {
                        const int t = total - x - y - z;
                        index[n] = {x, y, z, t};
                        factorial[n] = fact(x) * fact(y) * fact(z) * fact(t);
                        lookup[key(x, y, z, t)] = static_cast<short>(n);
                        ++n;
                    }
        for (std::size_t i = 0; i < kSize<K>; ++i)
            for (std::size_t j = 0; j < kSize<K>; ++j) {
                const auto& a = index[i];
                const auto& b = index[j];
                if (a.order() + b.order() > K) continue;
                products.push_back({static_cast<unsigned short>(i), static_cast<unsigned short>(j),
                                    static_cast<unsigned short>(slot({a.x + b.x, a.y + b.y, a.z + b.z, a.t + b.t}))});
            }
    }

    static constexpr int key(int x, int y, int z, int t) { return ((x * 5 + y) * 5 + z) * 5 + t; }
    static constexpr double fact(int n) { return n <= 1 ? 1.0 : n * fact(n - 1); }
    int slot(const MultiIndex& m) const {
        if (m.order() > K || m.x < 0 || m.y < 0 || m.z < 0 || m.t < 0) return -1;
        return lookup[key(m.x, m.y, m.z, m.t)];
    }
};

template <int K>
const Tables<K>& tables() {
    static const Tables<K> t;
    return t;
}

}  // namespace jet_detail

/// Derivatives of sinc(w) = sin(w)/w at w for orders 0..K.
template <int K>
std::array<double, K + 1> sinc_derivatives(double w) {
    std::array<double, K + 1> d{};
    if (std::abs(w) < 0.5) {
        // Power series sum_k (-1)^k w^{2k} / (2k+1)!, differentiated termwise.
        for (int m = 0; m <= K; ++m) {
            double sum = 0.0;
            for (int k = 0; k < 14; ++k) {
                const int p = 2 * k;
                if (p < m) continue;
                double term = (k % 2 == 0 ? 1.0 : -1.0);
                double denom = 1.0;
                for (int i = 2; i <= 2 * k + 1; ++i) denom *= i;
                double falling = 1.0;
                for (int i = 0; i < m; ++i) falling *= (p - i);
                sum += term * falling * std::pow(w, p - m) / denom;
            }
            d[m] = sum;
        }
        return d;
    }
    // Leibniz on sin(w) * w^{-1}.
    const double s = std::sin(w), c = std::cos(w);
    auto sin_d = [&](int j) { return (j % 4 == 0) ? s : (j % 4 == 1) ? c : (j % 4 == 2) ? -s : -c; };
    for (int m = 0; m <= K; ++m) {
        double sum = 0.0, binom = 1.0;
        for (int j = 0; j <= m; ++j) {
            const int r = m - j;
            double rf = 1.0;
            for (int i = 2; i <= r; ++i) rf *= i;
            const double inv_d = ((r % 2 == 0) ? 1.0 : -1.0) * rf / std::pow(w, r + 1);
            sum += binom * sin_d(j) * inv_d;
            binom = binom * (m - j) / (j + 1);
        }
        d[m] = sum;
    }
    return d;
}

/// Truncated multivariate Taylor expansion in (x, y, z, t) up to total order K.
/// Coefficients are Taylor coefficients; derivative(alpha) rescales by alpha!.
template <int K>
class Jet {
public:
    static constexpr int kOrder = K;
    static constexpr std::size_t kSize = jet_detail::kSize<K>;

    Jet() { c_.fill(0.0); }
    Jet(double constant) {  // NOLINT(google-explicit-constructor): scalars promote freely
        c_.fill(0.0);
        c_[0] = constant;
    }

    /// The coordinate function of variable `var` (0..3) evaluated at `value`.
    static Jet variable(int var, double value) {
        Jet j(value);
        if constexpr (K >= 1) j.c_[1 + var] = 1.0;
        return j;
    }

    /// A function of one coordinate, given its derivatives d^m f / dv^m for m = 0..K.
    /// Non-finite derivatives stay confined to the multi-indices that involve `var`.
    static Jet univariate(int var, const std::array<double, K + 1>& derivs) {
        Jet j;
        const auto& tab = jet_detail::tables<K>();
        for (int m = 0; m <= K; ++m) {
            MultiIndex a;
            (var == 0 ? a.x : var == 1 ? a.y : var == 2 ? a.z : a.t) = m;
            j.c_[tab.slot(a)] = derivs[m] / jet_detail::Tables<K>::fact(m);
        }
        return j;
    }

    double value() const noexcept { return c_[0]; }
    double coefficient(std::size_t slot) const noexcept { return c_[slot]; }
    double& coefficient(std::size_t slot) noexcept { return c_[slot]; }

    /// Partial derivative for a multi-index of order <= K.
    double derivative(const MultiIndex& a) const {
        const auto& tab = jet_detail::tables<K>();
        const int s = tab.slot(a);
        return s < 0 ? 0.0 : c_[s] * tab.factorial[s];
    }

    /// Composition f(*this) from the derivatives of f at value(), by Horner in the
    /// nilpotent part.
    Jet compose(const std::array<double, K + 1>& derivs) const {
        Jet d = *this;
        d.c_[0] = 0.0;
        Jet r(derivs[K] / jet_detail::Tables<K>::fact(K));
        for (int m = K - 1; m >= 0; --m) {
            r = r * d;
            r.c_[0] += derivs[m] / jet_detail::Tables<K>::fact(m);
        }
        return r;
    }

    Jet& operator+=(const Jet& o) noexcept {
        for (std::size_t i = 0; i < kSize; ++i) c_[i] += o.c_[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) noexcept {
        for (std::size_t i = 0; i < kSize; ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Jet& operator*=(double s) noexcept {
        for (auto& v : c_) v *= s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) noexcept { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) noexcept { return a -= b; }
    friend Jet operator-(Jet a) noexcept { return a *= -1.0; }
    friend Jet operator*(Jet a, double s) noexcept { return a *= s; }
    friend Jet operator*(double s, Jet a) noexcept { return a *= s; }
    friend Jet operator+(Jet a, double s) noexcept {
        a.c_[0] += s;
        return a;
    }
    friend Jet operator+(double s, Jet a) noexcept { return a + s; }
    friend Jet operator-(Jet a, double s) noexcept { return a + (-s); }
    friend Jet operator-(double s, const Jet& a) noexcept { return (-a) + s; }
    friend Jet operator/(Jet a, double s) noexcept { return a *= (1.0 / s); }

    friend Jet operator*(const Jet& a, const Jet& b) noexcept {
        if constexpr (K == 0) {
            return Jet(a.c_[0] * b.c_[0]);
        } else {
            Jet r;
            for (const auto& p : jet_detail::tables<K>().products) r.c_[p.out] += a.c_[p.a] * b.c_[p.b];
            return r;
        }
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
    friend Jet operator/(double s, const Jet& b) { return s * reciprocal(b); }

    friend Jet reciprocal(const Jet& a) {
        std::array<double, K + 1> d{};
        const double w = a.value();
        double inv = 1.0 / w, sign = 1.0, fact = 1.0;
        for (int m = 0; m <= K; ++m) {
            d[m] = sign * fact * std::pow(inv, m + 1);
            sign = -sign;
            fact *= (m + 1);
        }
        return a.compose(d);
    }

    friend Jet sin(const Jet& a) {
        const double s = std::sin(a.value()), c = std::cos(a.value());
        std::array<double, K + 1> d{};
        for (int m = 0; m <= K; ++m) d[m] = (m % 4 == 0) ? s : (m % 4 == 1) ? c : (m % 4 == 2) ? -s : -c;
        return a.compose(d);
    }

    friend Jet cos(const Jet& a) {
        const double s = std::sin(a.value()), c = std::cos(a.value());
        std::array<double, K + 1> d{};
        for (int m = 0; m <= K; ++m) d[m] = (m % 4 == 0) ? c : (m % 4 == 1) ? -s : (m % 4 == 2) ? -c : s;
        return a.compose(d);
    }

    friend Jet exp(const Jet& a) {
        std::array<double, K + 1> d{};
        d.fill(std::exp(a.value()));
        return a.compose(d);
    }

    friend Jet log(const Jet& a) {
        std::array<double, K + 1> d{};
        const double w = a.value();
        d[0] = std::log(w);
        double fact = 1.0, sign = 1.0;
        for (int m = 1; m <= K; ++m) {
            d[m] = sign * fact / std::pow(w, m);
            fact *= m;
            sign = -sign;
        }
        return a.compose(d);
    }

    /// a^p for real p; requires value() > 0 unless p is a non-negative integer.
    friend Jet pow(const Jet& a, double p) {
        std::array<double, K + 1> d{};
        const double w = a.value();
        double coef = 1.0;
        for (int m = 0; m <= K; ++m) {
            d[m] = coef == 0.0 ? 0.0 : coef * std::pow(w, p - m);
            coef *= (p - m);
        }
        return a.compose(d);
    }

    friend Jet sqrt(const Jet& a) { return pow(a, 0.5); }

    /// sin(w)/w, extended by 1 at w = 0.
    friend Jet sinc(const Jet& a) { return a.compose(sinc_derivatives<K>(a.value())); }

private:
    std::array<double, kSize> c_;
};

}  // namespace pns
