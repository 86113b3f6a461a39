#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <vector>

#include <fftw3.h>

#include "closedexact/errors.hpp"
#include "closedexact/multiindex.hpp"
#include "closedexact/symmetry.hpp"

namespace closedexact {

/**
 * @brief Complex values on the periodic grid (Z/M)^N.
 *
 * Node j in {0..M-1}^N stands for the lattice point with coordinates
 * j_a (if j_a < M/2) or j_a - M, and for the frequency 2 pi j / M brought
 * into [-pi, pi).  Storage is row-major, last axis fastest.
 */
class SpectralGrid {
 public:
  SpectralGrid(int dim, int M) : dim_(dim), M_(M) {
    if (dim < 1) throw PreconditionError("grid dimension must be >= 1");
    if (M < 8) throw PreconditionError("grid size M must be >= 8");
    length_ = 1;
    for (int a = 0; a < dim; ++a) length_ *= static_cast<std::size_t>(M);
    data_.assign(length_, {0.0, 0.0});
  }

  int dim() const { return dim_; }
  int size() const { return M_; }
  std::size_t length() const { return length_; }

  std::vector<std::complex<double>>& data() { return data_; }
  const std::vector<std::complex<double>>& data() const { return data_; }
  std::complex<double>& operator[](std::size_t idx) { return data_[idx]; }
  const std::complex<double>& operator[](std::size_t idx) const { return data_[idx]; }

  /// Integer node of a flat index.
  std::vector<int> node(std::size_t idx) const {
    std::vector<int> j(static_cast<std::size_t>(dim_));
    for (int a = dim_ - 1; a >= 0; --a) {
      j[static_cast<std::size_t>(a)] = static_cast<int>(idx % static_cast<std::size_t>(M_));
      idx /= static_cast<std::size_t>(M_);
    }
    return j;
  }

  /// Flat index of an integer vector taken modulo M.
  std::size_t index(const std::vector<int>& z) const {
    std::size_t idx = 0;
    for (int c : z) {
      int r = c % M_;
      if (r < 0) r += M_;
      idx = idx * static_cast<std::size_t>(M_) + static_cast<std::size_t>(r);
    }
    return idx;
  }
  std::size_t index(const LatticePoint& z) const { return index(z.coords); }

  /// Lattice point in the box [-M/2, M/2)^N represented by a node.
  LatticePoint point(std::size_t idx) const {
    auto j = node(idx);
    for (int& c : j)
      if (c >= M_ / 2) c -= M_;
    return LatticePoint(std::move(j));
  }

  bool in_box(const LatticePoint& z) const {
    for (int c : z)
      if (c < -M_ / 2 || c >= M_ - M_ / 2) return false;
    return true;
  }

  Frequency frequency(std::size_t idx) const {
    auto j = node(idx);
    Frequency alpha;
    alpha.reserve(j.size());
    for (int c : j) alpha.push_back(mod_2pi(2.0 * std::numbers::pi * c / M_));
    return alpha;
  }

  /// F c(alpha) = sum_z c(z) exp(+i z . alpha), in place.
  void forward() { transform(FFTW_BACKWARD); }

  /// Inverse of forward(), including the 1/M^N factor.
  void inverse() {
    transform(FFTW_FORWARD);
    const double scale = 1.0 / static_cast<double>(length_);
    for (auto& v : data_) v *= scale;
  }

 private:
  void transform(int sign) {
    static std::mutex planner_mutex;  // the FFTW planner is not reentrant
    std::vector<int> n(static_cast<std::size_t>(dim_), M_);
    auto* buf = reinterpret_cast<fftw_complex*>(data_.data());
    fftw_plan plan;
    {
      std::lock_guard lock(planner_mutex);
      plan = fftw_plan_dft(dim_, n.data(), buf, buf, sign, FFTW_ESTIMATE);
    }
    if (!plan) throw PreconditionError("FFTW could not plan the transform");
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(plan);
  }

  int dim_;
  int M_;
  std::size_t length_ = 0;
  std::vector<std::complex<double>> data_;
};

}  // namespace closedexact
