#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace lens {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

// zeta_q^g, the g-th power of the primitive root exp(2 pi i / q).
Complex root_of_unity(int q, long g);

// A representative of a class in L_q^n = S^{2n-1} / Z_q.
struct LensPoint {
  CVec rep;
  int q = 2;

  Eigen::Index dim() const { return rep.size(); }
};

// Normalizes rep and checks q >= 2. Throws NonUnitInput on a zero vector.
LensPoint make_lens_point(CVec rep, int q);

// Re(sum_k x_k conj(y_k)).
double real_inner(const CVec& x, const CVec& y);

// Quotient metric on L_q^n: min over g of the great-circle distance between
// a.rep and zeta^g b.rep.
double lens_distance(const LensPoint& a, const LensPoint& b);

// True when b.rep = zeta^g a.rep for some g, within tol.
bool class_equal(const LensPoint& a, const LensPoint& b, double tol = 1e-9);

struct HermitianEig {
  Eigen::VectorXd eigenvalues;  // ascending
  CMat eigenvectors;            // columns, same order
};

// Full spectral decomposition of (A + A^H) / 2. Each eigenvector is rotated so
// its largest-modulus entry is real and positive.
HermitianEig hermitian_eig(const CMat& a);

// v - <v,u> u, with <v,u> = sum v_k conj(u_k).
CVec project_offspan(const CVec& u, const CVec& v);

}  // namespace lens
