#include "lenscoords/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lenscoords/errors.hpp"

namespace lens {

namespace {

void check_same_length(const CVec& x, const CVec& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "vector lengths differ: " + std::to_string(x.size()) +
                                               " vs " + std::to_string(y.size()));
  }
}


}  // namespace

Complex root_of_unity(int q, long g) {
  long r = g % q;
  if (r < 0) r += q;
  if (r == 0) return {1.0, 0.0};
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / static_cast<double>(q));
}

LensPoint make_lens_point(CVec rep, int q) {
  if (q < 2) throw Error(ErrorCode::InvalidArgument, "lens modulus must be >= 2");
  const double norm = rep.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::NonUnitInput, "cannot normalize a zero or non-finite vector");
  }
  rep /= norm;
  return {std::move(rep), q};
}

double real_inner(const CVec& x, const CVec& y) {
  check_same_length(x, y);
  // Eigen's dot conjugates the first argument.
  return y.dot(x).real();
}

double lens_distance(const LensPoint& a, const LensPoint& b) {
  if (a.q != b.q) throw Error(ErrorCode::ModulusMismatch, "lens points have different q");
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "lens points differ in dimension");
  const Complex h = b.rep.dot(a.rep);  // <a, b>_C
  // Re<a, zeta^g b> = Re(conj(zeta^g) h); the best g maximizes it.
  double best = -std::numeric_limits<double>::infinity();
  int best_g = 0;
  for (int g = 0; g < a.q; ++g) {
    const double c = (std::conj(root_of_unity(a.q, g)) * h).real();
    if (c > best) {
      best = c;
      best_g = g;
    }
  }
  // The angle from the chord lengths keeps full precision near 0 and pi,
  // where arccos of the inner product loses about half the digits.
  const CVec rotated = root_of_unity(a.q, best_g) * b.rep;
  return 2.0 * std::atan2((a.rep - rotated).norm(), (a.rep + rotated).norm());
}

bool class_equal(const LensPoint& a, const LensPoint& b, double tol) {
  if (a.q != b.q || a.dim() != b.dim()) return false;
  for (int g = 0; g < a.q; ++g) {
    if ((b.rep - root_of_unity(a.q, g) * a.rep).norm() <= tol) return true;
  }
  return false;
}

HermitianEig hermitian_eig(const CMat& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::NonSquare, "hermitian_eig needs a square matrix, got " +
                                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  const CMat sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidArgument, "eigendecomposition did not converge");
  }
  HermitianEig out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index c = 0; c < out.eigenvectors.cols(); ++c) {
    auto col = out.eigenvectors.col(c);
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    const Complex pivot = col(arg);
    if (std::abs(pivot) > 0.0) col *= std::conj(pivot) / std::abs(pivot);
    col(arg) = Complex(col(arg).real(), 0.0);
  }
  return out;
}

CVec project_offspan(const CVec& u, const CVec& v) {
  check_same_length(u, v);
  const Complex c = u.dot(v);  // <v, u>_C = sum v_k conj(u_k)
  return v - c * u;
}

}  // namespace lens
