#include "hypstab/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include <cmath>
#include <random>
#include <sstream>

#include "hypstab/lyapunov.hpp"

namespace hypstab {

namespace {

// sinh(x)/x, accurate near 0.
double sinhc(double x) { return x == 0.0 ? 1.0 : std::sinh(x) / x; }

// log(sinh(x)/x) without overflow for large x.
double log_sinhc(double x) {
  if (x < 1.0) return std::log(sinhc(x));
  return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0) - std::log(x);
}

struct Entry {
  std::size_t row, col;
  double value;
};

std::vector<Entry> entries(const ShiftPropagator& p) {
  const int n = p.cells();
  const double k = p.epsilon() * p.step();
  auto u = [](int i) { return static_cast<std::size_t>(i - 1); };
  auto v = [n](int i) { return static_cast<std::size_t>(n + i); };
  std::vector<Entry> out;
  for (int i = 1; i <= n; ++i) {
    // shifted u_i comes from u_{i-1} (zero inflow at i = 1)
    if (i >= 2) out.push_back({u(i), u(i - 1), 1.0});
    if (i <= n - 1 && i + 1 <= n - 1 && k != 0.0) out.push_back({u(i), v(i + 1), k});
  }
  for (int i = 0; i <= n - 1; ++i) {
    if (i <= n - 2) out.push_back({v(i), v(i + 1), 1.0});
    if (i >= 1 && i - 1 >= 1 && k != 0.0) out.push_back({v(i), u(i - 1), k});
  }
  return out;
}

Eigen::SparseMatrix<double> sparse_of(const ShiftPropagator& p) {
  std::vector<Eigen::Triplet<double>> t;
  for (const auto& e : entries(p)) {
    t.emplace_back(static_cast<int>(e.row), static_cast<int>(e.col), e.value);
  }
  const auto dim = static_cast<Eigen::Index>(p.dimension());
  Eigen::SparseMatrix<double> m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

double solve_alpha(double c, double L, double epsilon) {
  if (!(c > 0.0 && L > 0.0)) throw DomainError("solve_alpha: c and L must be positive");
  if (!(epsilon > 0.0 && epsilon < c / L)) {
    std::ostringstream msg;
    msg << "solve_alpha: epsilon = " << epsilon << " outside (0, c/L) = (0, " << c / L << ")";
    throw DomainError(msg.str());
  }
  const double target = c / (L * epsilon);
  const double log_target = std::log(target);
  const double q = std::log(2.0 * c / (L * epsilon));
  double lo = 0.0;
  double hi = q + std::log(std::max(q, 1.0)) + 10.0;  // in units of L alpha
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double r = mid < 1.0 ? sinhc(mid) - target : log_sinhc(mid) - log_target;
    if (r < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Pick the endpoint with the smaller residual.
  const double rl = std::abs(sinhc(lo) - target), rh = std::abs(sinhc(hi) - target);
  return (rl <= rh ? lo : hi) / L;
}

EigenPair eigen_pair(double c, double L, double epsilon) {
  EigenPair p;
  p.epsilon = epsilon;
  p.c = c;
  p.length = L;
  p.alpha = solve_alpha(c, L, epsilon);
  const double decay = std::exp(-p.alpha * L);
  p.lambda = -c * p.alpha - epsilon * decay;
  p.mu_coef = -decay;
  p.sign = -1;
  p.d_coef = 1.0;
  p.a_coef = -p.mu_coef * p.d_coef;
  return p;
}

ProfilePair eigenfunction(const EigenPair& p, const Grid& grid) {
  ProfilePair out;
  out.u.resize(grid.size());
  out.v.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double up = std::exp(p.alpha * grid.node(i));
    const double down = std::exp(-p.alpha * grid.node(i));
    out.u[i] = p.a_coef * up + p.mu_coef * p.d_coef * down;
    out.v[i] = p.mu_coef * p.a_coef * up + p.d_coef * down;
  }
  return out;
}

ShiftPropagator::ShiftPropagator(int n, double epsilon, double c, double L)
    : n_(n), epsilon_(epsilon), c_(c), length_(L), step_(L / (c * n)) {
  if (n < 2) throw DomainError("ShiftPropagator: need at least 2 cells");
  if (!(epsilon >= 0.0)) throw DomainError("ShiftPropagator: epsilon must be nonnegative");
  if (!(c > 0.0 && L > 0.0)) throw DomainError("ShiftPropagator: c and L must be positive");
}

void ShiftPropagator::apply(const double* in, double* out) const {
  std::fill(out, out + dimension(), 0.0);
  for (const auto& e : entries(*this)) out[e.row] += e.value * in[e.col];
}

void ShiftPropagator::apply_transpose(const double* in, double* out) const {
  std::fill(out, out + dimension(), 0.0);
  for (const auto& e : entries(*this)) out[e.col] += e.value * in[e.row];
}

std::vector<double> ShiftPropagator::dense() const {
  const std::size_t d = dimension();
  std::vector<double> m(d * d, 0.0);
  for (const auto& e : entries(*this)) m[e.row * d + e.col] += e.value;
  return m;
}

std::vector<double> propagator_norms(const ShiftPropagator& prop, int n_steps, double tol) {
  if (n_steps < prop.cells()) throw DomainError("propagator_norms: n_steps must be >= N");
  const auto dim = static_cast<Eigen::Index>(prop.dimension());
  const Eigen::SparseMatrix<double> P = sparse_of(prop);
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(dim, dim);

  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    Eigen::VectorXd x(dim);
    for (Eigen::Index i = 0; i < dim; ++i) x[i] = normal(rng);
    return Eigen::VectorXd(x / x.norm());
  };

  std::vector<double> norms{1.0};
  Eigen::VectorXd x = random_vector();
  constexpr int kMaxIter = 4000;
  for (int n = 1; n <= n_steps; ++n) {
    M = P * M;
    if (M.cwiseAbs().maxCoeff() == 0.0) {
      norms.push_back(0.0);
      continue;
    }
    double sigma = 0.0;
    bool converged = false;
    for (int attempt = 0; attempt < 2 && !converged; ++attempt) {
      if (attempt == 1) x = random_vector();
      for (int it = 0; it < kMaxIter; ++it) {
        const Eigen::VectorXd y = M * x;
        const double next = y.norm();
        Eigen::VectorXd z = M.transpose() * y;
        const double zn = z.norm();
        if (zn == 0.0) {
          x = random_vector();
          continue;
        }
        x = z / zn;
        if (std::abs(next - sigma) <= tol * next) {
          sigma = std::max(sigma, next);
          converged = true;
          break;
        }
        sigma = next;
      }
    }
    if (!converged) {
      std::ostringstream msg;
      msg << "propagator_norms: power iteration stagnated at n = " << n;
      throw SolverError(msg.str());
    }
    norms.push_back(sigma);
  }
  return norms;
}

double dominant_eigenvalue_modulus(const ShiftPropagator& prop) {
  const auto dim = static_cast<Eigen::Index>(prop.dimension());
  const std::vector<double> d = prop.dense();
  const Eigen::MatrixXd m =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          d.data(), dim, dim);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  if (solver.info() != Eigen::Success) throw SolverError("eigenvalue computation failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

TailFit fit_tail_rate(const std::vector<double>& norms, double dt, double t_a, double t_b) {
  std::vector<double> t, y;
  for (std::size_t n = 0; n < norms.size(); ++n) {
    const double tn = static_cast<double>(n) * dt;
    if (tn < t_a) continue;
    if (tn >= t_b || !(norms[n] > 0.0)) break;
    t.push_back(tn);
    y.push_back(norms[n]);
  }
  const DecayFit fit = fit_decay(t, y, t_a, t_b);
  return {-fit.slope, fit.intercept, fit.points};
}

double semigroup_constant(const std::vector<double>& norms, double dt, double rate,
                          double epsilon) {
  double m = 0.0;
  for (std::size_t n = 0; n < norms.size(); ++n) {
    const double t = static_cast<double>(n) * dt;
    const double envelope =
        epsilon > 0.0 ? std::min(1.0, std::exp(-rate * t) / epsilon) : 1.0;
    m = std::max(m, norms[n] / envelope);
  }
  return m;
}

SpectralRow spectral_row(double c, double L, double epsilon, int n_cells) {
  const EigenPair pair = eigen_pair(c, L, epsilon);
  const ShiftPropagator prop(n_cells, epsilon, c, L);
  const std::vector<double> norms = propagator_norms(prop, 8 * n_cells);
  const double transit = L / c;
  const TailFit fit = fit_tail_rate(norms, prop.step(), 3.0 * transit, 8.0 * transit);
  SpectralRow row;
  row.epsilon = epsilon;
  row.alpha = pair.alpha;
  row.lambda = pair.lambda;
  row.fitted_rate = fit.rate;
  row.rate_ratio = fit.rate / (std::log(1.0 / epsilon) / transit);
  row.sup_norm = max_abs(norms);
  row.semigroup_constant = semigroup_constant(norms, prop.step(), fit.rate, epsilon);
  return row;
}

}  // namespace hypstab
