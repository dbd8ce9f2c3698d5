#include "vertex_scan.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace morpho::detail {

namespace {

using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;

constexpr double kBoundSlack = 1e-9;

// Rows of `a` spanning its row space.
Eigen::MatrixXd independent_rows(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return a;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.transpose());
  qr.setThreshold(1e-10);
  const auto r = qr.rank();
  Eigen::MatrixXd out(r, a.cols());
  for (Eigen::Index k = 0; k < r; ++k) out.row(k) = a.row(qr.colsPermutation().indices()[k]);
  return out;
}

}  // namespace

VertexMax max_thrust_vertex(const Eigen::Matrix3Xd& force, const Eigen::MatrixXd& constraint) {
  const auto n = static_cast<int>(force.cols());
  const Eigen::MatrixXd a = independent_rows(constraint);
  const auto r = static_cast<int>(a.rows());

  VertexMax best;
  best.eta = Eigen::VectorXd::Zero(n);
  if (r >= n) return best;  // only the origin remains

  std::vector<int> basis(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) basis[static_cast<std::size_t>(k)] = k;
  std::vector<int> nonbasic;
  Eigen::VectorXd eta(n);

  while (true) {
    nonbasic.clear();
    for (int i = 0, k = 0; i < n; ++i) {
      if (k < r && basis[static_cast<std::size_t>(k)] == i) {
        ++k;
      } else {
        nonbasic.push_back(i);
      }
    }

    Eigen::FullPivLU<SmallMat> lu;
    bool invertible = true;
    if (r > 0) {
      SmallMat sub(r, r);
      for (int k = 0; k < r; ++k) sub.col(k) = a.col(basis[static_cast<std::size_t>(k)]);
      lu.setThreshold(1e-10);
      lu.compute(sub);
      invertible = lu.isInvertible();
    }
    if (invertible) {
      const int free_count = static_cast<int>(nonbasic.size());
      for (unsigned mask = 0; mask < (1u << free_count); ++mask) {
        eta.setZero();
        SmallVec rhs = SmallVec::Zero(r);
        for (int b = 0; b < free_count; ++b) {
          if (mask & (1u << b)) {
            eta[nonbasic[static_cast<std::size_t>(b)]] = 1.0;
            if (r > 0) rhs -= a.col(nonbasic[static_cast<std::size_t>(b)]);
          }
        }
        bool inside = true;
        if (r > 0) {
          const SmallVec xb = lu.solve(rhs);
          for (int k = 0; k < r && inside; ++k) {
            const double v = xb[k];
            if (v < -kBoundSlack || v > 1.0 + kBoundSlack) inside = false;
            eta[basis[static_cast<std::size_t>(k)]] = std::clamp(v, 0.0, 1.0);
          }
        }
        if (!inside) continue;
        const double thrust = (force * eta).norm();
        if (thrust > best.thrust) {
          best.thrust = thrust;
          best.eta = eta;
        }
      }
    }

    // Next r-combination of {0..n-1} in lexicographic order.
    int k = r - 1;
    while (k >= 0 && basis[static_cast<std::size_t>(k)] == n - r + k) --k;
    if (k < 0) break;
    ++basis[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < r; ++j) {
      basis[static_cast<std::size_t>(j)] = basis[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return best;
}

}  // namespace morpho::detail
