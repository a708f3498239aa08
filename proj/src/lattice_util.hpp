#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cuspkit {

inline std::pair<double, double> lattice_coords(std::complex<double> z, std::complex<double> mu,
                                                std::complex<double> lambda) {
    double det = mu.real() * lambda.imag() - mu.imag() * lambda.real();
    double x = (z.real() * lambda.imag() - z.imag() * lambda.real()) / det;
    double y = (mu.real() * z.imag() - mu.imag() * z.real()) / det;
    return {x, y};
}

inline std::complex<double> reduce_point(std::complex<double> z, std::complex<double> mu, std::complex<double> lambda) {
    auto [x, y] = lattice_coords(z, mu, lambda);
    return z - std::floor(x) * mu - std::floor(y) * lambda;
}

// Calls f(v) for every lattice vector v with |delta - v| <= radius.
template <class F>
void for_each_translate(std::complex<double> mu, std::complex<double> lambda, std::complex<double> delta,
                        double radius, F&& f) {
    double area = std::abs(std::imag(std::conj(mu) * lambda));
    auto [x, y] = lattice_coords(delta, mu, lambda);
    double bx = radius * std::abs(lambda) / area, by = radius * std::abs(mu) / area;
    for (long m = static_cast<long>(std::ceil(x - bx)); m <= static_cast<long>(std::floor(x + bx)); ++m) {
        for (long n = static_cast<long>(std::ceil(y - by)); n <= static_cast<long>(std::floor(y + by)); ++n) {
            std::complex<double> v = static_cast<double>(m) * mu + static_cast<double>(n) * lambda;
            if (std::abs(delta - v) <= radius) f(v);
        }
    }
}

// Hash of points modulo a lattice, with tolerance-aware lookup.
class PeriodicGrid {
public:
    PeriodicGrid(std::complex<double> mu, std::complex<double> lambda, double tol)
        : mu_(mu), lambda_(lambda), tol_(tol), cells_(static_cast<std::int64_t>(std::ceil(1.0 / tol))) {}

    long find(std::complex<double> z, int tag) const {
        auto [x, y] = wrapped(z);
        std::int64_t ix = cell(x), iy = cell(y);
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                auto it = map_.find(key(tag, mod(ix + dx), mod(iy + dy)));
                if (it == map_.end()) continue;
                for (const auto& [px, py, idx] : it->second) {
                    double ex = x - px, ey = y - py;
                    ex -= std::round(ex);
                    ey -= std::round(ey);
                    if (std::abs(ex) < tol_ && std::abs(ey) < tol_) return idx;
                }
            }
        }
        return -1;
    }

    void insert(std::complex<double> z, int tag, long idx) {
        auto [x, y] = wrapped(z);
        map_[key(tag, cell(x), cell(y))].push_back({x, y, idx});
    }

private:
    struct Entry {
        double x, y;
        long idx;
    };
    std::pair<double, double> wrapped(std::complex<double> z) const {
        auto [x, y] = lattice_coords(z, mu_, lambda_);
        return {x - std::floor(x), y - std::floor(y)};
    }
    std::int64_t cell(double v) const { return mod(static_cast<std::int64_t>(std::floor(v / tol_))); }
    std::int64_t mod(std::int64_t i) const { return ((i % cells_) + cells_) % cells_; }
    std::int64_t key(int tag, std::int64_t ix, std::int64_t iy) const {
        return (static_cast<std::int64_t>(tag) * cells_ + ix) * cells_ + iy;
    }

    std::complex<double> mu_, lambda_;
    double tol_;
    std::int64_t cells_;
    std::unordered_map<std::int64_t, std::vector<Entry>> map_;
};

} // namespace cuspkit
