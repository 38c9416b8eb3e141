#include "gptkit/hermitian.hpp"

#include <cmath>

#include "gptkit/error.hpp"

namespace gptkit {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

std::vector<CMatrix> hermitian_basis(int n) {
  std::vector<CMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    CMatrix b = CMatrix::Zero(n, n);
    b(i, i) = 1.0;
    basis.push_back(std::move(b));
  }
  const Complex I(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      CMatrix re = CMatrix::Zero(n, n);
      re(i, j) = kInvSqrt2;
      re(j, i) = kInvSqrt2;
      basis.push_back(std::move(re));
      CMatrix im = CMatrix::Zero(n, n);
      im(i, j) = I * kInvSqrt2;
      im(j, i) = -I * kInvSqrt2;
      basis.push_back(std::move(im));
    }
  }
  return basis;
}

Eigen::VectorXd hermitian_coordinates(const CMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, "matrix is not square");
  const auto n = static_cast<int>(m.rows());
  Eigen::VectorXd x(n * n);
  Eigen::Index k = 0;
  for (int i = 0; i < n; ++i) x(k++) = m(i, i).real();
  const double s = std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      // tr(B_re M) = (M_ji + M_ij)/sqrt2, tr(B_im M) = i(M_ji - M_ij)/sqrt2
      const Complex re = (m(j, i) + m(i, j)) / s;
      const Complex im = Complex(0.0, 1.0) * (m(j, i) - m(i, j)) / s;
      x(k++) = re.real();
      x(k++) = im.real();
    }
  }
  return x;
}

CMatrix hermitian_from_coordinates(const Eigen::VectorXd& coords, int n) {
  if (coords.size() != static_cast<Eigen::Index>(n) * n) {
    fail(ErrorCode::DimensionMismatch, "coordinate vector does not match matrix size");
  }
  CMatrix m = CMatrix::Zero(n, n);
  Eigen::Index k = 0;
  for (int i = 0; i < n; ++i) m(i, i) = coords(k++);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double a = coords(k++) * kInvSqrt2;
      const double b = coords(k++) * kInvSqrt2;
      m(i, j) += Complex(a, b);
      m(j, i) += Complex(a, -b);
    }
  }
  return m;
}

Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m) {
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

bool is_hermitian(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::VectorXd kron(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMatrix product_operator(const Eigen::VectorXd& coords, int na, int nb) {
  const Eigen::Index ka = static_cast<Eigen::Index>(na) * na;
  const Eigen::Index kb = static_cast<Eigen::Index>(nb) * nb;
  if (coords.size() != ka * kb) {
    fail(ErrorCode::DimensionMismatch, "product coordinates do not match factor sizes");
  }
  const auto ba = hermitian_basis(na);
  const auto bb = hermitian_basis(nb);
  CMatrix op = CMatrix::Zero(na * nb, na * nb);
  for (Eigen::Index k = 0; k < ka; ++k) {
    for (Eigen::Index l = 0; l < kb; ++l) {
      const double c = coords(k * kb + l);
      if (c != 0.0) op += c * kron(ba[static_cast<std::size_t>(k)], bb[static_cast<std::size_t>(l)]);
    }
  }
  return op;
}

Eigen::VectorXd product_coordinates(const CMatrix& op, int na, int nb) {
  if (op.rows() != na * nb || op.cols() != na * nb) {
    fail(ErrorCode::DimensionMismatch, "operator does not match factor sizes");
  }
  const auto ba = hermitian_basis(na);
  const auto bb = hermitian_basis(nb);
  const auto ka = static_cast<Eigen::Index>(ba.size());
  const auto kb = static_cast<Eigen::Index>(bb.size());
  Eigen::VectorXd x(ka * kb);
  for (Eigen::Index k = 0; k < ka; ++k) {
    for (Eigen::Index l = 0; l < kb; ++l) {
      const CMatrix basis = kron(ba[static_cast<std::size_t>(k)], bb[static_cast<std::size_t>(l)]);
      x(k * kb + l) = (basis * op).trace().real();
    }
  }
  return x;
}

CVector random_unit_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

CMatrix random_density_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = Complex(re, im);
    }
  }
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace();
}

CMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases of R's diagonal so Q is Haar distributed.
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(i) *= d / mag;
  }
  return q;
}

CMatrix random_effect(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const CMatrix u = random_unitary(n, rng);
  Eigen::VectorXd lambda(n);
  for (int i = 0; i < n; ++i) lambda(i) = unit(rng);
  return u * lambda.cast<Complex>().asDiagonal() * u.adjoint();
}

}  // namespace gptkit
