// Copyright 2026 The heavyvar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

namespace heavyvar {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using SampleMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Symmetric PSD dispersion matrix with its eigendecomposition cached at
// construction. Immutable afterwards.
class CorrelationMatrix {
 public:
  CorrelationMatrix() : CorrelationMatrix(MatrixXd::Identity(1, 1)) {}
  explicit CorrelationMatrix(const MatrixXd& m);
  static CorrelationMatrix identity(Eigen::Index d);

  Eigen::Index dim() const { return m_.rows(); }
  const MatrixXd& matrix() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  double min_eigenvalue() const { return eig_.minCoeff(); }
  bool has_unit_diagonal(double tol = 1e-12) const;

  // Symmetric square root; slightly negative eigenvalues are treated as zero.
  const MatrixXd& sqrt() const { return sqrt_; }

  // singular-Q unless the minimum eigenvalue is positive.
  const MatrixXd& inverse() const;
  double log_det() const;

 private:
  MatrixXd m_;
  VectorXd eig_;
  MatrixXd vec_;
  MatrixXd sqrt_;
  MatrixXd inv_;
  bool invertible_ = false;
};

struct RepairResult {
  CorrelationMatrix matrix;
  double change = 0.0;  // max-abs entry change
  bool repaired = false;
};

// Eigenvalue clipping at `floor` on the correlation scale, then rescaling back
// to the original diagonal (unit diagonal when unit_diagonal is set).
RepairResult repair_psd(const MatrixXd& raw, bool unit_diagonal, double floor = 1e-8);

}  // namespace heavyvar
