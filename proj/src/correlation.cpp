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

#include "heavyvar/correlation.hpp"

#include <cmath>
#include <string>

#include "heavyvar/errors.hpp"

namespace heavyvar {

CorrelationMatrix::CorrelationMatrix(const MatrixXd& m) : m_(m) {
  require(m.rows() == m.cols() && m.rows() > 0, ErrorKind::dimension_mismatch,
          "dispersion matrix must be square and nonempty");
  require(m.allFinite(), ErrorKind::invalid_parameter, "dispersion matrix has non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  require((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, ErrorKind::invalid_parameter,
          "dispersion matrix is not symmetric");
  m_ = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m_);
  eig_ = es.eigenvalues();
  vec_ = es.eigenvectors();
  if (eig_.minCoeff() < -1e-10 * scale)
    fail(ErrorKind::not_psd, "minimum eigenvalue " + std::to_string(eig_.minCoeff()));
  VectorXd root = eig_.cwiseMax(0.0).cwiseSqrt();
  sqrt_ = vec_ * root.asDiagonal() * vec_.transpose();
  invertible_ = eig_.minCoeff() > 1e-14 * scale;
  if (invertible_) inv_ = vec_ * eig_.cwiseInverse().asDiagonal() * vec_.transpose();
}

CorrelationMatrix CorrelationMatrix::identity(Eigen::Index d) {
  return CorrelationMatrix(MatrixXd::Identity(d, d));
}

bool CorrelationMatrix::has_unit_diagonal(double tol) const {
  return (m_.diagonal().array() - 1.0).abs().maxCoeff() <= tol;
}

const MatrixXd& CorrelationMatrix::inverse() const {
  if (!invertible_) fail(ErrorKind::singular_matrix, "dispersion matrix is singular");
  return inv_;
}

double CorrelationMatrix::log_det() const {
  if (!invertible_) fail(ErrorKind::singular_matrix, "dispersion matrix is singular");
  return eig_.array().log().sum();
}

RepairResult repair_psd(const MatrixXd& raw, bool unit_diagonal, double floor) {
  require(raw.rows() == raw.cols(), ErrorKind::dimension_mismatch, "matrix must be square");
  const Eigen::Index d = raw.rows();
  MatrixXd sym = 0.5 * (raw + raw.transpose());
  VectorXd diag = sym.diagonal();
  require((diag.array() > 0).all(), ErrorKind::invalid_parameter, "diagonal must be positive");
  VectorXd s = diag.cwiseSqrt();
  MatrixXd c = s.cwiseInverse().asDiagonal() * sym * s.cwiseInverse().asDiagonal();

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(c);
  RepairResult out;
  if (es.eigenvalues().minCoeff() < floor) {
    VectorXd ev = es.eigenvalues().cwiseMax(floor);
    c = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    VectorXd cd = c.diagonal().cwiseSqrt().cwiseInverse();
    c = cd.asDiagonal() * c * cd.asDiagonal();
    out.repaired = true;
  }
  for (Eigen::Index i = 0; i < d; ++i) c(i, i) = 1.0;
  c = 0.5 * (c + c.transpose());
  MatrixXd fixed = unit_diagonal ? c : MatrixXd(s.asDiagonal() * c * s.asDiagonal());
  if (unit_diagonal) {
    MatrixXd target = s.cwiseInverse().asDiagonal() * sym * s.cwiseInverse().asDiagonal();
    out.change = (fixed - target).cwiseAbs().maxCoeff();
  } else {
    out.change = (fixed - sym).cwiseAbs().maxCoeff();
  }
  out.matrix = CorrelationMatrix(fixed);
  return out;
}

}  // namespace heavyvar
