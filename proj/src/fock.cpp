#include "pairspec/fock.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "pairspec/errors.hpp"
#include "pairspec/quadrature.hpp"

namespace pairspec {

const char* rule_name(DiscretizeRule r) {
  return r == DiscretizeRule::gauss_transformed ? "gauss_transformed" : "uniform_log";
}

DiscretizeRule parse_rule(const std::string& name) {
  if (name == "gauss_transformed") return DiscretizeRule::gauss_transformed;
  if (name == "uniform_log") return DiscretizeRule::uniform_log;
  throw InputError("unknown discretization rule: " + name);
}

double DiscreteModel::lambda_c0() const {
  double s = 0.0;
  for (int j = 0; j < n(); ++j) s += g[j] * g[j] / omega[j];
  if (!(s > 0.0)) throw InputError("discrete lambda_c0: model has no coupling");
  return -1.0 / s;
}

DiscreteModel discretize(const SpectralDensity& d, int n, DiscretizeRule rule) {
  if (n < 1) throw InputError("discretize: need n >= 1 modes");
  DiscreteModel m;
  m.omega.resize(n);
  m.g.resize(n);
  const double e0 = d.e0();
  if (rule == DiscretizeRule::gauss_transformed) {
    std::vector<double> x, w;
    quad::gauss_legendre(n, x, w);
    for (int i = 0; i < n; ++i) {
      const double t = 0.5 * (x[i] + 1.0);
      const double omt = 1.0 - t;
      const double mu = e0 + t / omt;
      const double wm = 0.5 * w[i] / (omt * omt);
      m.omega[i] = mu;
      m.g[i] = std::sqrt(wm * d.psi(mu));
    }
  } else {
    const double y_lo = -14.0, y_hi = 4.0;
    const double h = (y_hi - y_lo) / n;
    for (int i = 0; i < n; ++i) {
      const double y = y_lo + (i + 0.5) * h;
      const double mu = e0 + std::exp(y);
      m.omega[i] = mu;
      m.g[i] = std::sqrt(std::exp(y) * h * d.psi(mu));
    }
  }
  std::ostringstream os;
  os << d.label() << "/" << rule_name(rule) << "/" << n;
  m.source = os.str();
  return m;
}

DiscreteModel manual_model(std::vector<double> omega, std::vector<double> g) {
  if (omega.empty() || omega.size() != g.size())
    throw InputError("manual_model: omega and g must match and be nonempty");
  for (std::size_t j = 0; j < omega.size(); ++j) {
    if (!(omega[j] > 0.0) || !std::isfinite(omega[j]) || !std::isfinite(g[j]))
      throw InputError("manual_model: omega must be positive and entries finite");
    if (j > 0 && !(omega[j] > omega[j - 1]))
      throw InputError("manual_model: omega must be strictly increasing");
  }
  DiscreteModel m;
  m.omega = Eigen::Map<Eigen::VectorXd>(omega.data(), omega.size());
  m.g = Eigen::Map<Eigen::VectorXd>(g.data(), g.size());
  m.source = "manual";
  return m;
}

// ---- normal modes ----

namespace {

Eigen::MatrixXd coupling_matrix(const DiscreteModel& m, double lambda) {
  const int n = m.n();
  Eigen::VectorXd h(n);
  for (int j = 0; j < n; ++j) h[j] = std::sqrt(m.omega[j]) * m.g[j];
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) M(j, j) = m.omega[j] * m.omega[j];
  M.noalias() += lambda * h * h.transpose();
  return 0.5 * (M + M.transpose());
}

// eigenvalues of Omega^2 + lambda h h^T by bisection on the secular function
// 1 + lambda sum h_j^2/(w2_j - x), bracketed by interlacing
std::vector<double> secular_eigenvalues(const Eigen::VectorXd& w2,
                                        const Eigen::VectorXd& h, double lambda) {
  const int n = static_cast<int>(w2.size());
  std::vector<double> out;
  out.reserve(n);
  const double hmax = h.cwiseAbs().maxCoeff();
  std::vector<int> act;
  for (int j = 0; j < n; ++j) {
    if (std::abs(h[j]) > 1e-14 * std::max(1.0, hmax)) act.push_back(j);
    else out.push_back(w2[j]);  // decoupled mode
  }
  if (act.empty() || lambda == 0.0) {
    for (int j : act) out.push_back(w2[j]);
    std::sort(out.begin(), out.end());
    return out;
  }
  double hsq = 0.0;
  for (int j : act) hsq += h[j] * h[j];
  auto s = [&](double x) {
    double v = 1.0;
    for (int j : act) v += lambda * h[j] * h[j] / (w2[j] - x);
    return v;
  };
  auto bisect = [&](double a, double b, bool increasing) {
    for (int it = 0; it < 200 && b - a > 1e-16 * std::max(1.0, std::abs(b)); ++it) {
      const double mid = 0.5 * (a + b);
      const bool go_right = increasing ? s(mid) < 0.0 : s(mid) > 0.0;
      (go_right ? a : b) = mid;
    }
    return 0.5 * (a + b);
  };
  const int na = static_cast<int>(act.size());
  if (lambda > 0.0) {
    for (int i = 0; i + 1 < na; ++i)
      out.push_back(bisect(w2[act[i]], w2[act[i + 1]], true));
    out.push_back(bisect(w2[act[na - 1]], w2[act[na - 1]] + lambda * hsq, true));
  } else {
    out.push_back(bisect(w2[act[0]] + lambda * hsq, w2[act[0]], false));
    for (int i = 1; i < na; ++i)
      out.push_back(bisect(w2[act[i - 1]], w2[act[i]], false));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::VectorXd dense_eigenvalues_checked(const DiscreteModel& m, double lambda,
                                          Eigen::MatrixXd* vectors_out) {
  const Eigen::MatrixXd M = coupling_matrix(m, lambda);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  if (vectors_out)
    es.compute(M);
  else
    es.compute(M, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();
  const double scale = std::max(1.0, std::abs(ev[ev.size() - 1]));
  if (ev[0] < -1e-12 * scale) {
    std::ostringstream os;
    os << "normal_modes: discrete Hamiltonian is unbounded below "
       << "(min eig(M) = " << ev[0] << ", lambda below discrete lambda_c0 = "
       << m.lambda_c0() << ")";
    throw RegimeError(os.str());
  }
  for (int j = 0; j < ev.size(); ++j) ev[j] = std::max(0.0, ev[j]);

  const int n = m.n();
  Eigen::VectorXd w2(n), h(n);
  for (int j = 0; j < n; ++j) {
    w2[j] = m.omega[j] * m.omega[j];
    h[j] = std::sqrt(m.omega[j]) * m.g[j];
  }
  // dense values carry O(eps ||M||) absolute error, which the nearly
  // decoupled high modes keep out of the low end; 1e-8 relative in nu is a
  // x100 margin over the worst gap observed up to n = 2000 while staying far
  // below the mode spacing, so bracketing slips would still trip it
  const std::vector<double> sec = secular_eigenvalues(w2, h, lambda);
  for (int j = 0; j < n; ++j) {
    const double nu_d = std::sqrt(ev[j]);
    const double nu_s = std::sqrt(std::max(0.0, sec[j]));
    if (std::abs(nu_d - nu_s) > 1e-8 * std::max(1.0, nu_s))
      throw NumericError("normal_modes: dense and secular eigenvalues disagree",
                         nu_d, nu_s);
  }
  if (vectors_out) *vectors_out = es.eigenvectors();
  for (int j = 0; j < ev.size(); ++j) ev[j] = std::sqrt(ev[j]);
  return ev;
}

}  // namespace

Eigen::VectorXd normal_modes(const DiscreteModel& m, double lambda) {
  return dense_eigenvalues_checked(m, lambda, nullptr);
}

double discrete_ground_energy(const DiscreteModel& m, double lambda) {
  const Eigen::VectorXd nu = normal_modes(m, lambda);
  double e = 0.0;
  for (int j = 0; j < m.n(); ++j) e += nu[j] - m.omega[j];
  return 0.5 * e;
}

BogoliubovPair bogoliubov_pair(const DiscreteModel& m, double lambda,
                               bool with_residuals) {
  Eigen::MatrixXd O;
  const Eigen::VectorXd nu = dense_eigenvalues_checked(m, lambda, &O);
  const int n = m.n();
  if (!(nu[0] > 0.0))
    throw RegimeError("bogoliubov_pair: degenerate normal mode (nu_min = 0)");

  Eigen::VectorXd w_mh(n), w_ph(n), nu_ph(n), nu_mh(n);
  for (int j = 0; j < n; ++j) {
    w_mh[j] = 1.0 / std::sqrt(m.omega[j]);
    w_ph[j] = std::sqrt(m.omega[j]);
    nu_ph[j] = std::sqrt(nu[j]);
    nu_mh[j] = 1.0 / nu_ph[j];
  }
  const Eigen::MatrixXd A = w_mh.asDiagonal() * O * nu_ph.asDiagonal();
  const Eigen::MatrixXd B = w_ph.asDiagonal() * O * nu_mh.asDiagonal();

  BogoliubovPair bp;
  bp.U = 0.5 * (A + B);
  bp.V = 0.5 * (A - B);
  bp.frob_v_sq = bp.V.squaredNorm();
  for (int k = 0; k < n; ++k) bp.trace_nu_vtv += nu[k] * bp.V.col(k).squaredNorm();
  for (int j = 0; j < n; ++j)
    bp.trace_omega_vvt += m.omega[j] * bp.V.row(j).squaredNorm();
  if (with_residuals) {
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    bp.residuals[0] = (bp.U.transpose() * bp.U - bp.V.transpose() * bp.V - I).norm();
    bp.residuals[1] = (bp.U.transpose() * bp.V - bp.V.transpose() * bp.U).norm();
    bp.residuals[2] = (bp.U * bp.U.transpose() - bp.V * bp.V.transpose() - I).norm();
    bp.residuals[3] = (bp.U * bp.V.transpose() - bp.V * bp.U.transpose()).norm();
  } else {
    bp.residuals = {0.0, 0.0, 0.0, 0.0};
  }
  return bp;
}

// ---- truncated Fock diagonalization ----

std::size_t fock_dimension(int n_modes, int n_c) {
  long double dim = 1.0L;
  for (int i = 1; i <= n_c; ++i) dim = dim * (n_modes + i) / i;
  if (dim > 1e15L) return static_cast<std::size_t>(1e15);
  return static_cast<std::size_t>(dim + 0.5L);
}

namespace {

void enumerate_basis(int n_modes, int n_c, std::vector<std::vector<int>>& basis) {
  std::vector<int> cur(n_modes, 0);
  // graded by total occupation, lexicographic within a grade
  std::function<void(int, int)> rec = [&](int mode, int left) {
    if (mode == n_modes - 1) {
      cur[mode] = left;
      basis.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[mode] = k;
      rec(mode + 1, left - k);
    }
    cur[mode] = 0;
  };
  for (int q = 0; q <= n_c; ++q) rec(0, q);
}

std::vector<double> lanczos_lowest(const Eigen::SparseMatrix<double>& H, int k) {
  const int dim = static_cast<int>(H.rows());
  const int steps = std::min(dim, std::max(3 * k, 120));
  std::vector<Eigen::VectorXd> basis;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v[0] = 1.0;
  basis.push_back(v);
  std::vector<double> alpha, beta;
  for (int i = 0; i < steps; ++i) {
    Eigen::VectorXd w = H * basis[i];
    if (i > 0) w -= beta[i - 1] * basis[i - 1];
    const double a = basis[i].dot(w);
    alpha.push_back(a);
    w -= a * basis[i];
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : basis) w -= u.dot(w) * u;
    const double b = w.norm();
    if (b < 1e-13) break;
    beta.push_back(b);
    basis.push_back(w / b);
  }
  const int mm = static_cast<int>(alpha.size());
  Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(mm, mm);
  for (int i = 0; i < mm; ++i) {
    Tm(i, i) = alpha[i];
    if (i + 1 < mm) Tm(i, i + 1) = Tm(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (int i = 0; i < std::min(k, mm); ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

}  // namespace

FockResult fock_diagonalize(const DiscreteModel& m, double lambda, int n_c, int k,
                            std::size_t dim_cap, EigenMethod method) {
  if (n_c < 0) throw InputError("fock_diagonalize: n_c must be >= 0");
  const int n_modes = m.n();
  const std::size_t dim = fock_dimension(n_modes, n_c);
  if (dim > dim_cap) {
    std::ostringstream os;
    os << "fock_diagonalize: basis dimension " << dim << " exceeds cap " << dim_cap;
    throw InputError(os.str());
  }

  std::vector<std::vector<int>> basis;
  basis.reserve(dim);
  enumerate_basis(n_modes, n_c, basis);
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < basis.size(); ++i)
    index[basis[i]] = static_cast<int>(i);

  const int nd = static_cast<int>(basis.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nd) * n_modes * 2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int b = 0; b < nd; ++b) {
    std::vector<int> occ = basis[b];
    for (int j = 0; j < n_modes; ++j) {
      if (occ[j] == 0) continue;
      const double amp = m.g[j] * std::sqrt(double(occ[j])) * inv_sqrt2;
      occ[j] -= 1;
      const int tgt = index.at(occ);
      occ[j] += 1;
      trip.emplace_back(tgt, b, amp);
      trip.emplace_back(b, tgt, amp);
    }
  }
  Eigen::SparseMatrix<double> S(nd, nd);
  S.setFromTriplets(trip.begin(), trip.end());

  Eigen::SparseMatrix<double> H = (0.5 * lambda * (S * S).eval()).eval();
  for (int b = 0; b < nd; ++b) {
    double diag = 0.0;
    for (int j = 0; j < n_modes; ++j) diag += basis[b][j] * m.omega[j];
    H.coeffRef(b, b) += diag;
  }
  H.makeCompressed();

  FockResult fr;
  fr.n_modes = n_modes;
  fr.n_c = n_c;
  fr.dim = static_cast<std::size_t>(nd);
  try {
    fr.cutoff_flag = lambda < m.lambda_c0();
  } catch (const InputError&) {
    fr.cutoff_flag = false;  // zero-coupling model
  }

  const bool dense = method == EigenMethod::dense ||
                     (method == EigenMethod::automatic && nd <= 2048);
  if (dense) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(H),
                                                      Eigen::EigenvaluesOnly);
    for (int i = 0; i < std::min(k, nd); ++i)
      fr.eigenvalues.push_back(es.eigenvalues()[i]);
  } else {
    fr.eigenvalues = lanczos_lowest(H, k);
  }
  return fr;
}

}  // namespace pairspec
