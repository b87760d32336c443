#pragma once

#include "rlos/random.hpp"
#include "rlos/types.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace rlos {

struct SimplexSolverOptions {
  int restarts = 16;
  /// Stopping rule on the objective change of the multiplicative warm-up.
  double tolerance = 1e-10;
  int warmup_iterations = 2000;
  int polish_iterations = 500;
  std::uint64_t seed = 0x5EEDULL;
};

/// Optional half-space coeffsᵀb >= floor intersected with the simplex.
struct ReturnFloor {
  Eigen::VectorXd coeffs;
  double floor = 0.0;
};

struct SimplexSolution {
  Eigen::VectorXd weights;
  double value = -std::numeric_limits<double>::infinity();
};

// An Objective provides
//   double value(const Eigen::VectorXd&) const;
//   Eigen::VectorXd gradient(const Eigen::VectorXd&) const;
//   Eigen::MatrixXd hessian(const Eigen::VectorXd&) const;
// and must be smooth on the relative interior of the feasible set.

namespace detail {

inline Index argmax_lowest(const Eigen::VectorXd& v) {
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i) {
    if (v(i) > v(best)) best = i;
  }
  return best;
}

/// Multiplicative (exponentiated-gradient) ascent with backtracking.
template <typename Objective>
double exponentiated_gradient(const Objective& f, Eigen::VectorXd& b,
                              const SimplexSolverOptions& opts) {
  double fb = f.value(b);
  double eta = 1.0;
  for (int it = 0; it < opts.warmup_iterations; ++it) {
    const Eigen::VectorXd g = f.gradient(b);
    const double gmax = g.maxCoeff();
    Eigen::VectorXd trial;
    double ft = fb;
    bool accepted = false;
    while (eta > 1e-14) {
      trial = (b.array() * (eta * (g.array() - gmax)).exp()).matrix();
      trial /= trial.sum();
      ft = f.value(trial);
      if (std::isfinite(ft) && ft >= fb) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;
    const double change = ft - fb;
    b = trial;
    fb = ft;
    eta = std::min(eta * 2.0, 1e8);
    if (change <= opts.tolerance * std::max(1.0, std::abs(fb))) break;
  }
  return fb;
}

/// Active-set method on the faces of the simplex (and the optional floor).
/// Newton steps on the current face when the reduced Hessian is negative
/// definite, projected-gradient steps otherwise; coordinates enter the
/// support when their KKT multiplier sign is violated.
template <typename Objective>
double active_set_polish(const Objective& f, Eigen::VectorXd& b,
                         const std::optional<ReturnFloor>& floor, int max_iterations) {
  const Index d = b.size();
  for (Index i = 0; i < d; ++i) {
    if (b(i) < 1e-9) b(i) = 0.0;
  }
  b /= b.sum();

  bool floor_active = false;
  if (floor) {
    const double slack = floor->coeffs.dot(b) - floor->floor;
    if (slack <= 0.0) {
      const Index v = argmax_lowest(floor->coeffs);
      const double top = floor->coeffs(v);
      const double cur = floor->coeffs.dot(b);
      if (top - cur > 0.0) {
        const double t = std::clamp((floor->floor - cur) / (top - cur), 0.0, 1.0);
        b *= (1.0 - t);
        b(v) += t;
      }
      floor_active = true;
    }
  }

  std::vector<char> in_support(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) in_support[static_cast<std::size_t>(i)] = b(i) > 0.0;

  double fb = f.value(b);
  double grad_step = 1.0;
  bool just_added = false;
  bool stalled = false;

  for (int iter = 0; iter < max_iterations; ++iter) {
    const Eigen::VectorXd g = f.gradient(b);
    std::vector<Index> support;
    for (Index i = 0; i < d; ++i) {
      if (in_support[static_cast<std::size_t>(i)]) support.push_back(i);
    }
    const auto ns = static_cast<Index>(support.size());
    const Index rows = floor_active ? 2 : 1;

    Eigen::MatrixXd constraints_t(ns, rows);
    Eigen::VectorXd gs(ns), bs(ns), as(ns);
    for (Index k = 0; k < ns; ++k) {
      const Index i = support[static_cast<std::size_t>(k)];
      gs(k) = g(i);
      bs(k) = b(i);
      as(k) = floor ? floor->coeffs(i) : 0.0;
      constraints_t(k, 0) = 1.0;
      if (floor_active) constraints_t(k, 1) = as(k);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(constraints_t);
    qr.setThreshold(1e-12);
    const Index rank = qr.rank();
    const Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd z = q.rightCols(ns - rank);
    const Eigen::VectorXd rg = z.transpose() * gs;
    const double scale = std::max(1.0, gs.cwiseAbs().maxCoeff());

    const bool stationary =
        stalled || rg.size() == 0 || rg.cwiseAbs().maxCoeff() <= 1e-12 * scale;
    stalled = false;

    if (stationary) {
      // Multipliers from gs = nu * 1 - gamma * as by least squares.
      double nu = 0.0;
      double gamma = 0.0;
      if (floor_active) {
        Eigen::MatrixXd basis(ns, 2);
        basis.col(0).setOnes();
        basis.col(1) = -as;
        const Eigen::Vector2d mult = basis.colPivHouseholderQr().solve(gs);
        nu = mult(0);
        gamma = mult(1);
      } else {
        nu = gs.mean();
      }
      Index enter = -1;
      double worst = 1e-12 * scale;
      for (Index i = 0; i < d; ++i) {
        if (in_support[static_cast<std::size_t>(i)]) continue;
        const double ai = floor ? floor->coeffs(i) : 0.0;
        const double violation = g(i) - nu + (floor_active ? gamma * ai : 0.0);
        if (violation > worst) {
          worst = violation;
          enter = i;
        }
      }
      if (enter >= 0) {
        in_support[static_cast<std::size_t>(enter)] = 1;
        just_added = true;
        continue;
      }
      if (floor_active && gamma < -1e-12 * scale) {
        floor_active = false;
        continue;
      }
      break;
    }

    Eigen::VectorXd dir_reduced = rg;
    bool newton = false;
    if (!just_added) {
      const Eigen::MatrixXd h = f.hessian(b);
      Eigen::MatrixXd hs(ns, ns);
      for (Index r = 0; r < ns; ++r) {
        for (Index c = 0; c < ns; ++c) {
          hs(r, c) = h(support[static_cast<std::size_t>(r)], support[static_cast<std::size_t>(c)]);
        }
      }
      const Eigen::MatrixXd reduced = z.transpose() * hs * z;
      Eigen::LLT<Eigen::MatrixXd> llt(-reduced);
      if (llt.info() == Eigen::Success) {
        const Eigen::VectorXd candidate = llt.solve(rg);
        if (candidate.allFinite() && candidate.dot(rg) > 0.0) {
          dir_reduced = candidate;
          newton = true;
        }
      }
    }
    just_added = false;

    const Eigen::VectorXd ps = z * dir_reduced;
    const double slope = gs.dot(ps);
    if (!(slope > 0.0)) {
      stalled = true;
      continue;
    }

    double alpha_max = std::numeric_limits<double>::infinity();
    Index blocking = -1;  // -2 marks the floor
    for (Index k = 0; k < ns; ++k) {
      if (ps(k) < 0.0) {
        const double r = -bs(k) / ps(k);
        if (r < alpha_max) {
          alpha_max = r;
          blocking = k;
        }
      }
    }
    if (floor && !floor_active) {
      const double da = as.dot(ps);
      if (da < 0.0) {
        const double r = std::max(0.0, floor->coeffs.dot(b) - floor->floor) / (-da);
        if (r < alpha_max) {
          alpha_max = r;
          blocking = -2;
        }
      }
    }

    double alpha = newton ? std::min(1.0, alpha_max) : std::min(grad_step, alpha_max);
    Eigen::VectorXd trial = b;
    double ft = fb;
    bool accepted = false;
    for (int bt = 0; bt < 80; ++bt) {
      trial = b;
      for (Index k = 0; k < ns; ++k) trial(support[static_cast<std::size_t>(k)]) += alpha * ps(k);
      ft = f.value(trial);
      if (std::isfinite(ft) && ft >= fb + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      stalled = true;
      continue;
    }
    const bool hit = alpha == alpha_max;
    if (hit && blocking >= 0) {
      const Index i = support[static_cast<std::size_t>(blocking)];
      trial(i) = 0.0;
      in_support[static_cast<std::size_t>(i)] = 0;
    } else if (hit && blocking == -2) {
      floor_active = true;
    }
    for (Index i = 0; i < d; ++i) {
      if (trial(i) < 0.0) {
        trial(i) = 0.0;
        in_support[static_cast<std::size_t>(i)] = 0;
      }
    }
    b = trial;
    fb = f.value(b);
    if (!newton) grad_step = std::min(alpha * 2.0, 1e6);
  }
  b /= b.sum();
  return f.value(b);
}

}  // namespace detail

/// Maximizes a smooth objective over {b >= 0, 1ᵀb = 1} (optionally with a
/// floor constraint) from the uniform point plus random simplex restarts.
/// Ties between restarts keep the earlier start.
template <typename Objective>
SimplexSolution maximize_on_simplex(const Objective& f, Index d,
                                    const std::optional<ReturnFloor>& floor,
                                    const SimplexSolverOptions& opts) {
  if (d < 1) throw ValidationError("maximize_on_simplex: dimension must be >= 1");
  if (d == 1) {
    Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
    return {one, f.value(one)};
  }
  Rng rng(opts.seed);
  SimplexSolution best;
  const int starts = std::max(1, opts.restarts);
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd b = s == 0 ? uniform_portfolio(d) : rng.simplex_point(d);
    detail::exponentiated_gradient(f, b, opts);
    const double value = detail::active_set_polish(f, b, floor, opts.polish_iterations);
    if (floor && floor->coeffs.dot(b) < floor->floor - 1e-12) continue;
    if (std::isfinite(value) && value > best.value + 1e-15) {
      best.weights = b;
      best.value = value;
    }
  }
  if (best.weights.size() == 0) {
    throw RuntimeFailure("maximize_on_simplex: no feasible solution reached");
  }
  return best;
}

}  // namespace rlos
