#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fman/jet.hpp"

namespace fman {

// Dense component array of a rank-r object on an n-dimensional chart. Index
// order is whatever the owning operation documents (upper indices first by
// convention, derivative index last).
template <class T>
class Tensor {
 public:
  Tensor() = default;
  Tensor(int n, int rank, const T& fill = T{}) : n_(n), rank_(rank) {
    std::size_t size = 1;
    for (int k = 0; k < rank; ++k) size *= static_cast<std::size_t>(n);
    data_.assign(size, fill);
  }

  int dim() const { return n_; }
  int rank() const { return rank_; }
  std::size_t size() const { return data_.size(); }

  template <class... I>
  T& operator()(I... idx) {
    return data_[offset(std::array<int, sizeof...(I)>{static_cast<int>(idx)...})];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    return data_[offset(std::array<int, sizeof...(I)>{static_cast<int>(idx)...})];
  }

  T& flat(std::size_t k) { return data_[k]; }
  const T& flat(std::size_t k) const { return data_[k]; }
  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  // Decode a flat offset into indices (most significant first).
  void unflatten(std::size_t k, int* idx) const {
    for (int a = rank_ - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(k % static_cast<std::size_t>(n_));
      k /= static_cast<std::size_t>(n_);
    }
  }

 private:
  template <std::size_t R>
  std::size_t offset(const std::array<int, R>& idx) const {
    std::size_t k = 0;
    for (std::size_t a = 0; a < R; ++a) k = k * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[a]);
    return k;
  }

  int n_ = 0;
  int rank_ = 0;
  std::vector<T> data_;
};

using Values = Tensor<double>;
using JetTensor = Tensor<Jet>;

JetTensor zero_jets(int n, int rank, int dim, int order);

// Values at the expansion point.
Values values_of(const JetTensor& t);
// First derivatives with the derivative index appended last.
Values gradients_of(const JetTensor& t);
// Second derivatives with two derivative indices appended last.
Values hessians_of(const JetTensor& t);

// Inverse of a square matrix of jets (rank-2 tensor), by Gauss-Jordan with
// partial pivoting on the values. Throws DomainError on a singular value matrix.
JetTensor inverse(const JetTensor& m);
// Inverse of a numeric matrix; throws DomainError when singular.
Values inverse(const Values& m);

}  // namespace fman
