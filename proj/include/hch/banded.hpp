#pragma once

#include <cstddef>
#include <vector>

namespace hch {

// LU factorization of a band matrix with kl sub- and ku super-diagonals,
// partial pivoting (LAPACK gbtrf storage: factored band gains kl extra
// super-diagonals from row interchanges). Factor once, solve many.
class BandedLU {
  public:
    BandedLU(std::size_t n, std::size_t kl, std::size_t ku);

    // Entry access while assembling; (i, j) must lie inside the band.
    void set(std::size_t i, std::size_t j, double v);
    double get(std::size_t i, std::size_t j) const;

    std::size_t size() const { return n_; }

    // Factor in place; throws on exact zero pivot (singular matrix).
    void factor();

    // Solve A x = rhs using the factorization; rhs is overwritten with x.
    void solve(std::vector<double>& rhs) const;

  private:
    std::size_t n_, kl_, ku_;
    std::size_t rows_;               // kl_ + kl_ + ku_ + 1 storage rows
    std::vector<double> ab_;         // column-major band storage
    std::vector<std::size_t> ipiv_;
    bool factored_ = false;

    double& at(std::size_t r, std::size_t c) { return ab_[c * rows_ + r]; }
    double at(std::size_t r, std::size_t c) const { return ab_[c * rows_ + r]; }
};

}  // namespace hch
