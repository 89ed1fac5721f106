#pragma once

// Rectangular (u,v) grids and scalar/vector fields sampled on them.
// Storage is row-major with u varying fastest: index (i,j) -> j*n_u + i,
// so a "row" j is the set of nodes at fixed v = v_j.  Threaded loops
// partition over rows.

#include <cstddef>
#include <vector>

#include "wsurf/errors.hpp"
#include "wsurf/minkowski.hpp"

namespace wsurf {

struct GridSpec {
  double u0 = 0.0, u1 = 1.0;
  double v0 = 0.0, v1 = 1.0;
  int n_u = 3, n_v = 3;

  double h_u() const { return (u1 - u0) / (n_u - 1); }
  double h_v() const { return (v1 - v0) / (n_v - 1); }
  double u(int i) const { return u0 + i * h_u(); }
  double v(int j) const { return v0 + j * h_v(); }
  std::size_t size() const { return static_cast<std::size_t>(n_u) * n_v; }

  void validate() const {
    if (n_u < 3 || n_v < 3) throw UsageError("grid needs at least 3 nodes per axis");
    if (!(u1 > u0) || !(v1 > v0)) throw UsageError("grid ranges must be increasing");
  }
};

template <class T>
class GridField {
 public:
  GridField() = default;
  GridField(int n_u, int n_v, T fill = T{})
      : n_u_(n_u), n_v_(n_v), data_(static_cast<std::size_t>(n_u) * n_v, fill) {}
  explicit GridField(const GridSpec& g, T fill = T{}) : GridField(g.n_u, g.n_v, fill) {}

  int n_u() const { return n_u_; }
  int n_v() const { return n_v_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * n_u_ + i]; }
  const T& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(j) * n_u_ + i];
  }
  T& operator[](std::size_t k) { return data_[k]; }
  const T& operator[](std::size_t k) const { return data_[k]; }

  std::vector<T>& raw() { return data_; }
  const std::vector<T>& raw() const { return data_; }

  bool same_shape(const GridField& o) const { return n_u_ == o.n_u_ && n_v_ == o.n_v_; }

 private:
  int n_u_ = 0, n_v_ = 0;
  std::vector<T> data_;
};

using Field = GridField<double>;
using VecField = GridField<MinkowskiVec>;

}  // namespace wsurf
