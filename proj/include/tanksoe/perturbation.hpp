#ifndef TANKSOE_PERTURBATION_HPP
#define TANKSOE_PERTURBATION_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

#include "diff_engine.hpp"

namespace tanksoe {

struct BKError : std::runtime_error {
  enum Kind { too_few_unstable, too_many_unstable, singular };
  Kind kind;
  int n_stable, n_required;
  BKError(Kind k, int stable, int required, const std::string& msg)
      : std::runtime_error(msg), kind(k), n_stable(stable), n_required(required) {}
};

struct SylvesterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FirstOrderSolution {
  int n = 0, ns = 0, ne = 0;
  std::vector<int> states;
  Eigen::MatrixXd S;  // ns x n selection of predetermined variables
  Eigen::MatrixXd G;  // y_t - ybar = G (S (y_{t-1} - ybar)) + H eps_t
  Eigen::MatrixXd H;
  std::vector<double> moduli;  // generalized eigenvalue moduli, ascending
  int n_stable = 0;
  std::vector<double> near_unit;
  double lin_residual = 0.0;
  double spectral_radius = 0.0;

  // full-vector transition y_t = T y_{t-1} + R eps_t in deviations
  Eigen::MatrixXd T() const { return G * S; }
  const Eigen::MatrixXd& R() const { return H; }
  // g_v with v = [S y_{t-1}; eps_t]
  Eigen::MatrixXd gv() const
  {
    Eigen::MatrixXd out(n, ns + ne);
    out << G, H;
    return out;
  }
};

struct SecondOrderSolution {
  FirstOrderSolution first;
  Eigen::MatrixXd gvv;  // n x nv^2, y = ... + 1/2 gvv (v kron v)
  Eigen::VectorXd gss;  // 1/2 gss enters the constant
  Eigen::MatrixXd Sigma;
  double sylvester_residual = 0.0;
  double gss_residual = 0.0;

  int nv() const { return first.ns + first.ne; }
};

namespace detail {

inline lapack_logical select_stable(const double* ar, const double* ai, const double* be)
{
  // strict inside the unit circle; unit-modulus ties count as unstable
  return std::hypot(*ar, *ai) < (1.0 - 1e-9) * std::fabs(*be);
}

}  // namespace detail

inline FirstOrderSolution solve_first_order(const DerivativeBundle& d, const std::vector<int>& states,
                                            double near_unit_band = 1e-3)
{
  using Eigen::MatrixXd;
  FirstOrderSolution sol;
  const int n = static_cast<int>(d.J0.rows()), ns = static_cast<int>(states.size());
  const int ne = static_cast<int>(d.Je.cols());
  sol.n = n;
  sol.ns = ns;
  sol.ne = ne;
  sol.states = states;
  sol.S = MatrixXd::Zero(ns, n);
  for (int i = 0; i < ns; ++i) sol.S(i, states[i]) = 1.0;
  for (int j = 0; j < n; ++j) {
    if (std::find(states.begin(), states.end(), j) != states.end()) continue;
    if (d.Jm.col(j).cwiseAbs().maxCoeff() > 0)
      throw BKError(BKError::singular, 0, ns,
                    "variable " + std::to_string(j) + " appears lagged but is not declared predetermined");
  }

  const int N = n + ns;
  MatrixXd A = MatrixXd::Zero(N, N), B = MatrixXd::Zero(N, N);
  A.block(0, ns, n, n) = d.Jp;
  A.block(n, 0, ns, ns).setIdentity();
  B.block(0, 0, n, ns) = -d.Jm * sol.S.transpose();
  B.block(0, ns, n, n) = -d.J0;
  B.block(n, ns, ns, n) = sol.S;

  // dgges on the pencil (B, A): eigenvalues lambda = alpha / beta with B v = lambda A v
  std::vector<double> ar(N), ai(N), be(N);
  MatrixXd vsl(N, N), vsr(N, N);
  lapack_int sdim = 0;
  lapack_int info = LAPACKE_dgges(LAPACK_COL_MAJOR, 'N', 'V', 'S', detail::select_stable, N, B.data(), N,
                                  A.data(), N, &sdim, ar.data(), ai.data(), be.data(), vsl.data(), N,
                                  vsr.data(), N);
  if (info != 0 && info != N + 2)
    throw BKError(BKError::singular, 0, ns, "QZ decomposition failed, info=" + std::to_string(info));
  for (int i = 0; i < N; ++i) {
    const double m = std::hypot(ar[i], ai[i]);
    sol.moduli.push_back(be[i] == 0.0 ? INFINITY : m / std::fabs(be[i]));
  }
  std::sort(sol.moduli.begin(), sol.moduli.end());
  sol.n_stable = static_cast<int>(sdim);
  for (double m : sol.moduli)
    if (std::fabs(m - 1.0) < near_unit_band) sol.near_unit.push_back(m);
  if (sol.n_stable > ns)
    throw BKError(BKError::too_few_unstable, sol.n_stable, ns,
                  "Blanchard-Kahn violated: " + std::to_string(sol.n_stable) + " stable roots for " +
                      std::to_string(ns) + " predetermined variables (indeterminacy)");
  if (sol.n_stable < ns)
    throw BKError(BKError::too_many_unstable, sol.n_stable, ns,
                  "Blanchard-Kahn violated: " + std::to_string(sol.n_stable) + " stable roots for " +
                      std::to_string(ns) + " predetermined variables (no stable solution)");

  if (ns > 0) {
    const MatrixXd Z11 = vsr.topLeftCorner(ns, ns), Z21 = vsr.bottomLeftCorner(n, ns);
    Eigen::FullPivLU<MatrixXd> lu(Z11);
    if (!lu.isInvertible()) throw BKError(BKError::singular, sol.n_stable, ns, "Z11 is singular");
    sol.G = Z21 * lu.inverse();
  } else {
    sol.G = MatrixXd::Zero(n, 0);
  }
  const MatrixXd A0 = d.J0 + d.Jp * sol.G * sol.S;
  Eigen::FullPivLU<MatrixXd> lu0(A0);
  if (!lu0.isInvertible()) throw BKError(BKError::singular, sol.n_stable, ns, "impact matrix is singular");
  sol.H = -lu0.solve(d.Je);

  const MatrixXd rg = d.Jm * sol.S.transpose() + d.J0 * sol.G + d.Jp * sol.G * sol.S * sol.G;
  const MatrixXd rh = A0 * sol.H + d.Je;
  sol.lin_residual = std::max(rg.size() ? rg.cwiseAbs().maxCoeff() : 0.0,
                              rh.size() ? rh.cwiseAbs().maxCoeff() : 0.0);
  if (ns > 0) {
    Eigen::EigenSolver<MatrixXd> es(sol.S * sol.G, false);
    sol.spectral_radius = es.eigenvalues().cwiseAbs().maxCoeff();
  }
  return sol;
}

// (x1 kron x2) index for the quadratic coefficient layout
inline int kron_index(int a, int b, int nv) { return a * nv + b; }

inline SecondOrderSolution solve_second_order(const DerivativeBundle& d, const FirstOrderSolution& f,
                                              const Eigen::MatrixXd& Sigma)
{
  using Eigen::MatrixXcd;
  using Eigen::MatrixXd;
  using cd = std::complex<double>;
  if (!d.has_hessian) throw SylvesterError("second derivatives missing");
  const int n = f.n, ns = f.ns, ne = f.ne, nv = ns + ne, nv2 = nv * nv;
  SecondOrderSolution out;
  out.first = f;
  out.Sigma = Sigma;

  const MatrixXd gv = f.gv();
  MatrixXd Nm = MatrixXd::Zero(nv, nv);
  Nm.topRows(ns) = f.S * gv;

  // d(stacked argument)/dv
  MatrixXd M1 = MatrixXd::Zero(3 * n + ne, nv);
  for (int i = 0; i < ns; ++i) M1(f.states[i], i) = 1.0;
  M1.middleRows(n, n) = gv;
  M1.middleRows(2 * n, n) = f.G * f.S * gv;
  for (int i = 0; i < ne; ++i) M1(3 * n + i, ns + i) = 1.0;

  MatrixXd Q = MatrixXd::Zero(n, nv2);
  for (int i = 0; i < n; ++i) {
    MatrixXd Qi = MatrixXd::Zero(nv, nv);
    for (const auto& h : d.H[i]) {
      if (h.j == h.k) {
        Qi.noalias() += h.v * M1.row(h.j).transpose() * M1.row(h.j);
      } else {
        const MatrixXd t = h.v * M1.row(h.j).transpose() * M1.row(h.k);
        Qi += t + t.transpose();
      }
    }
    for (int a = 0; a < nv; ++a)
      for (int b = 0; b < nv; ++b) Q(i, kron_index(a, b, nv)) = Qi(a, b);
  }

  const MatrixXd A0 = d.J0 + d.Jp * f.G * f.S;
  const MatrixXd& Fp = d.Jp;

  Eigen::ComplexSchur<MatrixXd> schur(Nm);
  const MatrixXcd U = schur.matrixU(), Tm = schur.matrixT();
  MatrixXcd W(nv2, nv2);
  for (int a = 0; a < nv; ++a)
    for (int b = 0; b < nv; ++b) W.block(a * nv, b * nv, nv, nv) = U(a, b) * U;

  const MatrixXcd rhs = -(Q.cast<cd>() * W);
  MatrixXcd Y = MatrixXcd::Zero(n, nv2);
  MatrixXcd FY = MatrixXcd::Zero(n, nv2);
  const MatrixXcd A0c = A0.cast<cd>(), Fpc = Fp.cast<cd>();
  for (int a2 = 0; a2 < nv; ++a2) {
    for (int b2 = 0; b2 < nv; ++b2) {
      const int c = kron_index(a2, b2, nv);
      Eigen::VectorXcd acc = rhs.col(c);
      for (int a1 = 0; a1 <= a2; ++a1) {
        const cd ta = Tm(a1, a2);
        if (ta == cd(0)) continue;
        for (int b1 = 0; b1 <= b2; ++b1) {
          const int rr = kron_index(a1, b1, nv);
          if (rr == c) continue;
          const cd tt = ta * Tm(b1, b2);
          if (tt != cd(0)) acc -= FY.col(rr) * tt;
        }
      }
      const cd diag = Tm(a2, a2) * Tm(b2, b2);
      Eigen::PartialPivLU<MatrixXcd> lu(A0c + diag * Fpc);
      const double rc = lu.rcond();
      if (!(rc > 1e-14)) throw SylvesterError("singular quadratic-coefficient system (unit root?)");
      Y.col(c) = lu.solve(acc);
      FY.col(c) = Fpc * Y.col(c);
    }
  }
  const MatrixXcd Xc = Y * W.adjoint();
  out.gvv = Xc.real();

  // symmetrise in (a,b)
  for (int a = 0; a < nv; ++a)
    for (int b = a + 1; b < nv; ++b) {
      const Eigen::VectorXd m = 0.5 * (out.gvv.col(kron_index(a, b, nv)) + out.gvv.col(kron_index(b, a, nv)));
      out.gvv.col(kron_index(a, b, nv)) = m;
      out.gvv.col(kron_index(b, a, nv)) = m;
    }

  // plug-back check of the quadratic block
  MatrixXd NN(nv2, nv2);
  for (int a = 0; a < nv; ++a)
    for (int b = 0; b < nv; ++b) NN.block(a * nv, b * nv, nv, nv) = Nm(a, b) * Nm;
  const MatrixXd resid = A0 * out.gvv + Fp * (out.gvv * NN) + Q;
  out.sylvester_residual = resid.size() ? resid.cwiseAbs().maxCoeff() : 0.0;

  // variance correction
  Eigen::VectorXd rhs_s = Eigen::VectorXd::Zero(n);
  for (int a = 0; a < ne; ++a)
    for (int b = 0; b < ne; ++b) {
      if (Sigma(a, b) == 0.0) continue;
      rhs_s += Fp * out.gvv.col(kron_index(ns + a, ns + b, nv)) * Sigma(a, b);
    }
  const MatrixXd HSH = f.H * Sigma * f.H.transpose();
  for (int i = 0; i < n; ++i) {
    for (const auto& h : d.H[i]) {
      if (h.j < 2 * n || h.j >= 3 * n || h.k < 2 * n || h.k >= 3 * n) continue;
      const double c = HSH(h.j - 2 * n, h.k - 2 * n);
      rhs_s(i) += (h.j == h.k ? 1.0 : 2.0) * h.v * c;
    }
  }
  const MatrixXd As = A0 + Fp;
  Eigen::FullPivLU<MatrixXd> lus(As);
  if (!lus.isInvertible()) throw SylvesterError("singular variance-correction system");
  out.gss = -lus.solve(rhs_s);
  out.gss_residual = (As * out.gss + rhs_s).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace tanksoe

#endif
