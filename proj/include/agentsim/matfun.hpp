#pragma once

// Dense matrix functions for exponential integrators: e^A and the
// exponential-like phi functions
//
//   phi1(A) = int_0^1 e^{(1-theta)A} dtheta,
//   phi2(A) = int_0^1 e^{(1-theta)A} theta dtheta,
//
// which satisfy A*phi1(A) = e^A - I and A*phi2(A) = phi1(A) - I.
//
// e^A is computed with a degree-13 diagonal Pade approximant combined with
// norm-based scaling and squaring. The phi functions are read off the
// exponential of a block-augmented matrix, which avoids the unstable
// recurrence phi_{k+1}(A) = (phi_k(A) - 1/k!) A^{-1} when A is singular or
// ill conditioned:
//
//   exp [A I 0]   [e^A phi1(A) phi2(A)]
//       [0 0 I] = [ 0     I       I   ]
//       [0 0 0]   [ 0     0       I   ]
//
// Action variants phi1_apply / phi12_apply append the operand vectors as
// extra columns instead of full identity blocks, so a single (n+1) or (n+2)
// exponential yields phi1(A)v or phi1(A)a + phi2(A)b.
//
// Everything here is dense and sized for a few hundred rows at most; no
// Krylov/action-only machinery for large sparse operators is provided.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace agentsim {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// phi1 for scalar arguments, (e^x - 1)/x extended by continuity at 0.
template <typename Scalar> Scalar phi1_scalar(Scalar x) {
  if (std::abs(x) < Scalar(1e-5))
    return Scalar(1) + x / Scalar(2) + x * x / Scalar(6);
  return std::expm1(x) / x;
}

/// phi2 for scalar arguments, (e^x - 1 - x)/x^2 extended by continuity at 0.
template <typename Scalar> Scalar phi2_scalar(Scalar x) {
  if (std::abs(x) < Scalar(1e-2)) {
    // expm1(x) - x cancels below ~1e-2; five series terms keep full accuracy
    const Scalar x2 = x * x;
    return Scalar(0.5) + x / Scalar(6) + x2 / Scalar(24) +
           x2 * x / Scalar(120) + x2 * x2 / Scalar(720);
  }
  return (std::expm1(x) - x) / (x * x);
}

namespace detail {

template <class Derived>
void require_square_finite(const Eigen::MatrixBase<Derived>& A,
                           const char* who) {
  if (A.rows() == 0 || A.rows() != A.cols())
    throw std::invalid_argument(std::string(who) +
                                ": input must be a non-empty square matrix");
  if (!A.allFinite())
    throw std::invalid_argument(std::string(who) +
                                ": input has non-finite entries");
}

// Diagonal (13,13) Pade approximant to e^A, valid for ||A||_1 <= theta13.
template <typename Scalar>
DenseMatrix<Scalar> expm_pade13(const DenseMatrix<Scalar>& A) {
  static const double b[] = {64764752532480000., 32382376266240000.,
                             7771770303897600.,  1187353796428800.,
                             129060195264000.,   10559470521600.,
                             670442572800.,      33522128640.,
                             1323241920.,        40840800.,
                             960960.,            16380.,
                             182.,               1.};
  const Eigen::Index n = A.rows();
  const DenseMatrix<Scalar> I = DenseMatrix<Scalar>::Identity(n, n);
  const DenseMatrix<Scalar> A2 = A * A;
  const DenseMatrix<Scalar> A4 = A2 * A2;
  const DenseMatrix<Scalar> A6 = A4 * A2;

  DenseMatrix<Scalar> tmp =
      A6 * (Scalar(b[13]) * A6 + Scalar(b[11]) * A4 + Scalar(b[9]) * A2);
  tmp += Scalar(b[7]) * A6 + Scalar(b[5]) * A4 + Scalar(b[3]) * A2 +
         Scalar(b[1]) * I;
  const DenseMatrix<Scalar> U = A * tmp;

  DenseMatrix<Scalar> V =
      A6 * (Scalar(b[12]) * A6 + Scalar(b[10]) * A4 + Scalar(b[8]) * A2);
  V += Scalar(b[6]) * A6 + Scalar(b[4]) * A4 + Scalar(b[2]) * A2 +
       Scalar(b[0]) * I;

  return (V - U).partialPivLu().solve(V + U);
}

} // namespace detail

/// Matrix exponential e^A (degree-13 Pade with scaling and squaring).
template <class Derived>
DenseMatrix<typename Derived::Scalar> expm(const Eigen::MatrixBase<Derived>& A_in) {
  using Scalar = typename Derived::Scalar;
  detail::require_square_finite(A_in, "expm");

  const Eigen::Index n = A_in.rows();
  if (n == 1) {
    DenseMatrix<Scalar> r(1, 1);
    r(0, 0) = std::exp(A_in(0, 0));
    return r;
  }

  DenseMatrix<Scalar> A = A_in;
  const double theta13 = 5.371920351148152;
  const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();

  int squarings = 0;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    if (std::ldexp(norm1, -squarings) > theta13) ++squarings;
    A *= Scalar(std::ldexp(1.0, -squarings));
  }

  DenseMatrix<Scalar> R = detail::expm_pade13(A);
  for (int i = 0; i < squarings; ++i) R = R * R;
  return R;
}

/// phi1(A) and phi2(A) computed jointly from one block-augmented exponential.
template <class Derived>
std::pair<DenseMatrix<typename Derived::Scalar>,
          DenseMatrix<typename Derived::Scalar>>
phi12(const Eigen::MatrixBase<Derived>& A_in) {
  using Scalar = typename Derived::Scalar;
  detail::require_square_finite(A_in, "phi12");

  const Eigen::Index n = A_in.rows();
  if (n == 1) {
    DenseMatrix<Scalar> p1(1, 1), p2(1, 1);
    p1(0, 0) = phi1_scalar(A_in(0, 0));
    p2(0, 0) = phi2_scalar(A_in(0, 0));
    return {p1, p2};
  }

  const DenseMatrix<Scalar> A = A_in;
  const DenseMatrix<Scalar> I = DenseMatrix<Scalar>::Identity(n, n);
  if (A.cwiseAbs().colwise().sum().maxCoeff() < 1e-8) {
    // truncated series; avoids cancellation for vanishing arguments
    const DenseMatrix<Scalar> A2 = A * A;
    return {I + A / Scalar(2) + A2 / Scalar(6),
            I / Scalar(2) + A / Scalar(6) + A2 / Scalar(24)};
  }

  DenseMatrix<Scalar> M = DenseMatrix<Scalar>::Zero(3 * n, 3 * n);
  M.topLeftCorner(n, n) = A;
  M.block(0, n, n, n) = I;
  M.block(n, 2 * n, n, n) = I;
  const DenseMatrix<Scalar> E = expm(M);
  return {E.block(0, n, n, n), E.block(0, 2 * n, n, n)};
}

/// phi1(A) alone via the two-block augmentation.
template <class Derived>
DenseMatrix<typename Derived::Scalar> phi1(const Eigen::MatrixBase<Derived>& A_in) {
  using Scalar = typename Derived::Scalar;
  detail::require_square_finite(A_in, "phi1");

  const Eigen::Index n = A_in.rows();
  if (n == 1) {
    DenseMatrix<Scalar> r(1, 1);
    r(0, 0) = phi1_scalar(A_in(0, 0));
    return r;
  }

  const DenseMatrix<Scalar> A = A_in;
  const DenseMatrix<Scalar> I = DenseMatrix<Scalar>::Identity(n, n);
  if (A.cwiseAbs().colwise().sum().maxCoeff() < 1e-8)
    return I + A / Scalar(2) + (A * A) / Scalar(6);

  DenseMatrix<Scalar> M = DenseMatrix<Scalar>::Zero(2 * n, 2 * n);
  M.topLeftCorner(n, n) = A;
  M.block(0, n, n, n) = I;
  return expm(M).block(0, n, n, n);
}

template <class Derived>
DenseMatrix<typename Derived::Scalar> phi2(const Eigen::MatrixBase<Derived>& A) {
  return phi12(A).second;
}

/// phi1(A) * v through an (n+1)-order augmented exponential.
template <class Derived, class VDerived>
DenseVector<typename Derived::Scalar>
phi1_apply(const Eigen::MatrixBase<Derived>& A_in,
           const Eigen::MatrixBase<VDerived>& v_in) {
  using Scalar = typename Derived::Scalar;
  detail::require_square_finite(A_in, "phi1_apply");
  const Eigen::Index n = A_in.rows();
  if (v_in.size() != n || v_in.cols() != 1)
    throw std::invalid_argument("phi1_apply: vector size mismatch");

  const DenseVector<Scalar> v = v_in;
  if (n == 1) return DenseVector<Scalar>::Constant(1, phi1_scalar(A_in(0, 0)) * v(0));

  const DenseMatrix<Scalar> A = A_in;
  if (A.cwiseAbs().colwise().sum().maxCoeff() < 1e-8) {
    const DenseVector<Scalar> Av = A * v;
    return v + Av / Scalar(2) + (A * Av) / Scalar(6);
  }

  DenseMatrix<Scalar> M = DenseMatrix<Scalar>::Zero(n + 1, n + 1);
  M.topLeftCorner(n, n) = A;
  M.block(0, n, n, 1) = v;
  return expm(M).block(0, n, n, 1);
}

/// phi1(A)*a + phi2(A)*b through an (n+2)-order augmented exponential.
template <class Derived, class ADerived, class BDerived>
DenseVector<typename Derived::Scalar>
phi12_apply(const Eigen::MatrixBase<Derived>& A_in,
            const Eigen::MatrixBase<ADerived>& a_in,
            const Eigen::MatrixBase<BDerived>& b_in) {
  using Scalar = typename Derived::Scalar;
  detail::require_square_finite(A_in, "phi12_apply");
  const Eigen::Index n = A_in.rows();
  if (a_in.size() != n || b_in.size() != n)
    throw std::invalid_argument("phi12_apply: vector size mismatch");

  const DenseVector<Scalar> a = a_in;
  const DenseVector<Scalar> b = b_in;
  if (n == 1)
    return DenseVector<Scalar>::Constant(
        1, phi1_scalar(A_in(0, 0)) * a(0) + phi2_scalar(A_in(0, 0)) * b(0));

  const DenseMatrix<Scalar> A = A_in;
  if (A.cwiseAbs().colwise().sum().maxCoeff() < 1e-8) {
    const DenseVector<Scalar> Aa = A * a;
    const DenseVector<Scalar> Ab = A * b;
    return a + Aa / Scalar(2) + (A * Aa) / Scalar(6) + b / Scalar(2) +
           Ab / Scalar(6) + (A * Ab) / Scalar(24);
  }

  // With M = [A b a; 0 0 1; 0 0 0], M^k has top-right column
  // A^{k-1} a + A^{k-2} b, so column n+1 of e^M sums to phi1(A)a + phi2(A)b.
  DenseMatrix<Scalar> M = DenseMatrix<Scalar>::Zero(n + 2, n + 2);
  M.topLeftCorner(n, n) = A;
  M.block(0, n, n, 1) = b;
  M.block(0, n + 1, n, 1) = a;
  M(n, n + 1) = Scalar(1);
  return expm(M).block(0, n + 1, n, 1);
}

} // namespace agentsim
