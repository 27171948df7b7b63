#pragma once

#include "hflow/hflow.hpp"
#include "hflow/testing.hpp"

#include <gtest/gtest.h>

namespace hflow::test {

inline ::testing::AssertionResult near(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return ::testing::AssertionFailure() << "shape mismatch";
  const double d = (a - b).cwiseAbs().maxCoeff();
  if (d <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "max deviation " << d << " > " << tol << "\nactual:\n" << a << "\nexpected:\n" << b;
}

inline ::testing::AssertionResult near(const KForm& a, const KForm& b, double tol) {
  const double d = (a - b).coeffs().cwiseAbs().maxCoeff();
  if (d <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "max coefficient deviation " << d << " > " << tol;
}

inline Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

using Gen = hflow::testing::Generator;

}  // namespace hflow::test
