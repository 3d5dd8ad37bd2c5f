#include "hch/banded.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hch {

BandedLU::BandedLU(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), rows_(2 * kl + ku + 1), ab_(rows_ * n, 0.0), ipiv_(n, 0) {
    if (n == 0) throw std::invalid_argument("BandedLU: empty matrix");
}

// (i, j) lives at storage row kl + ku + i - j of column j.
void BandedLU::set(std::size_t i, std::size_t j, double v) {
    if (i >= n_ || j >= n_ || (j > i && j - i > ku_) || (i > j && i - j > kl_))
        throw std::out_of_range("BandedLU::set outside band at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
    at(kl_ + ku_ + i - j, j) = v;
}

double BandedLU::get(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_ || (j > i && j - i > ku_) || (i > j && i - j > kl_)) return 0.0;
    return at(kl_ + ku_ + i - j, j);
}

void BandedLU::factor() {
    const std::size_t kv = kl_ + ku_;  // upper bandwidth after fill
    for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t ilast = std::min(n_ - 1, j + kl_);
        std::size_t p = j;
        double pmax = std::abs(at(kv + j - j, j));
        for (std::size_t i = j + 1; i <= ilast; ++i) {
            const double v = std::abs(at(kv + i - j, j));
            if (v > pmax) {
                pmax = v;
                p = i;
            }
        }
        if (pmax == 0.0)
            throw std::runtime_error("BandedLU: singular matrix at column " + std::to_string(j));
        ipiv_[j] = p;
        const std::size_t clast = std::min(n_ - 1, j + kv);
        if (p != j)
            for (std::size_t c = j; c <= clast; ++c)
                std::swap(at(kv + j - c, c), at(kv + p - c, c));
        const double piv = at(kv, j);
        for (std::size_t i = j + 1; i <= ilast; ++i) {
            const double l = at(kv + i - j, j) / piv;
            at(kv + i - j, j) = l;
            for (std::size_t c = j + 1; c <= clast; ++c)
                at(kv + i - c, c) -= l * at(kv + j - c, c);
        }
    }
    factored_ = true;
}

void BandedLU::solve(std::vector<double>& rhs) const {
    if (!factored_) throw std::logic_error("BandedLU::solve before factor");
    if (rhs.size() != n_) throw std::invalid_argument("BandedLU::solve rhs size mismatch");
    const std::size_t kv = kl_ + ku_;
    for (std::size_t j = 0; j < n_; ++j) {
        if (ipiv_[j] != j) std::swap(rhs[j], rhs[ipiv_[j]]);
        const std::size_t ilast = std::min(n_ - 1, j + kl_);
        for (std::size_t i = j + 1; i <= ilast; ++i) rhs[i] -= at(kv + i - j, j) * rhs[j];
    }
    for (std::size_t jj = n_; jj-- > 0;) {
        const std::size_t lo = jj > kv ? jj - kv : 0;
        rhs[jj] /= at(kv, jj);
        for (std::size_t i = lo; i < jj; ++i) rhs[i] -= at(kv + i - jj, jj) * rhs[jj];
    }
}

}  // namespace hch
