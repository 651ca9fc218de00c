/*
 * Copyright 2026 The choquet-probit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "chopro/sqp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/QR>

namespace chopro {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double eval_or_inf(const Objective& f, const Eigen::VectorXd& x) {
  const double v = f(x);
  return std::isfinite(v) ? v : kInf;
}
}  // namespace

Eigen::VectorXd central_gradient(const Objective& f, const Eigen::VectorXd& x, double step) {
  const auto n = x.size();
  Eigen::VectorXd g(n);
  Eigen::VectorXd xp = x;
  double f0 = kInf;  // evaluated lazily, only for one-sided fallbacks
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = step * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    const double fp = eval_or_inf(f, xp);
    xp[i] = x[i] - h;
    const double fm = eval_or_inf(f, xp);
    xp[i] = x[i];
    if (std::isfinite(fp) && std::isfinite(fm)) {
      g[i] = (fp - fm) / (2.0 * h);
    } else {
      if (!std::isfinite(f0)) f0 = eval_or_inf(f, x);
      if (std::isfinite(fp)) {
        g[i] = (fp - f0) / h;
      } else if (std::isfinite(fm)) {
        g[i] = (f0 - fm) / h;
      } else {
        g[i] = 0.0;
      }
    }
  }
  return g;
}

Eigen::MatrixXd central_hessian(const Objective& f, const Eigen::VectorXd& x, double step) {
  const auto n = x.size();
  Eigen::MatrixXd h_mat(n, n);
  Eigen::VectorXd h(n);
  for (Eigen::Index i = 0; i < n; ++i) h[i] = step * std::max(1.0, std::abs(x[i]));

  const double f0 = eval_or_inf(f, x);
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    xp[i] = x[i] + h[i];
    const double fp = eval_or_inf(f, xp);
    xp[i] = x[i] - h[i];
    const double fm = eval_or_inf(f, xp);
    xp[i] = x[i];
    h_mat(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      xp[i] = x[i] + h[i];
      xp[j] = x[j] + h[j];
      const double fpp = eval_or_inf(f, xp);
      xp[j] = x[j] - h[j];
      const double fpm = eval_or_inf(f, xp);
      xp[i] = x[i] - h[i];
      xp[j] = x[j] + h[j];
      const double fmp = eval_or_inf(f, xp);
      xp[j] = x[j] - h[j];
      const double fmm = eval_or_inf(f, xp);
      xp[i] = x[i];
      xp[j] = x[j];
      h_mat(i, j) = h_mat(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
    }
  }
  return h_mat;
}

LinearConstraints LinearConstraints::none(int n_vars) {
  LinearConstraints c;
  c.a_eq.resize(0, n_vars);
  c.b_eq.resize(0);
  c.a_in.resize(0, n_vars);
  c.b_in.resize(0);
  return c;
}

namespace {

// Solve the equality-constrained problem  min 1/2 p'Bp + r'p  s.t. C p = 0
// by a rank-revealing null-space method; also returns least-squares
// multipliers for  C' lambda = r  at the solution when requested.
struct EqpResult {
  Eigen::VectorXd p;
};

Eigen::MatrixXd null_space_basis(const Eigen::MatrixXd& c_mat) {
  // Null space of C from the column-pivoted QR of C'.
  const auto n = c_mat.cols();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(c_mat.transpose());
  qr.setThreshold(1e-10);
  const auto rank = qr.rank();
  if (rank >= n) return Eigen::MatrixXd(n, 0);
  const Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(n - rank);
}

Eigen::VectorXd solve_eqp(const Eigen::MatrixXd& b_mat, const Eigen::VectorXd& r,
                          const Eigen::MatrixXd& c_mat) {
  const auto n = b_mat.rows();
  if (c_mat.rows() == 0) {
    Eigen::LLT<Eigen::MatrixXd> llt(b_mat);
    if (llt.info() == Eigen::Success) return llt.solve(-r);
    Eigen::MatrixXd reg = b_mat;
    reg.diagonal().array() += 1e-8 * std::max(1.0, b_mat.diagonal().maxCoeff());
    return Eigen::LLT<Eigen::MatrixXd>(reg).solve(-r);
  }
  const Eigen::MatrixXd z = null_space_basis(c_mat);
  if (z.cols() == 0) return Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd h = z.transpose() * b_mat * z;
  Eigen::VectorXd rhs = -z.transpose() * r;
  Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() != Eigen::Success) {
    h.diagonal().array() += 1e-8 * std::max(1.0, h.diagonal().maxCoeff());
    llt.compute(h);
  }
  return z * llt.solve(rhs);
}

Eigen::VectorXd least_squares_multipliers(const Eigen::MatrixXd& c_mat,
                                          const Eigen::VectorXd& r) {
  // min || C' lambda - r ||
  return c_mat.transpose().colPivHouseholderQr().solve(r);
}

}  // namespace

QpSolution solve_convex_qp(const Eigen::MatrixXd& b_mat, const Eigen::VectorXd& g,
                           const Eigen::MatrixXd& a_eq, const Eigen::MatrixXd& a_in,
                           const Eigen::VectorXd& slack_in) {
  const auto n = g.size();
  const auto m_eq = a_eq.rows();
  const auto m_in = a_in.rows();

  QpSolution sol;
  sol.d = Eigen::VectorXd::Zero(n);
  sol.eq_multipliers = Eigen::VectorXd::Zero(m_eq);
  sol.in_multipliers = Eigen::VectorXd::Zero(m_in);

  std::vector<int> working;  // active inequality indices
  std::vector<char> in_working(m_in, 0);
  // Inequalities already at their bound participate from the start.
  for (Eigen::Index i = 0; i < m_in; ++i) {
    if (slack_in[i] <= 1e-12) {
      working.push_back(static_cast<int>(i));
      in_working[i] = 1;
    }
  }

  const int max_iter = 6 * static_cast<int>(n + m_in) + 20;
  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::MatrixXd c_mat(m_eq + static_cast<Eigen::Index>(working.size()), n);
    if (m_eq > 0) c_mat.topRows(m_eq) = a_eq;
    for (std::size_t w = 0; w < working.size(); ++w) {
      c_mat.row(m_eq + static_cast<Eigen::Index>(w)) = a_in.row(working[w]);
    }

    const Eigen::VectorXd r = g + b_mat * sol.d;
    const Eigen::VectorXd p = solve_eqp(b_mat, r, c_mat);

    if (p.lpNorm<Eigen::Infinity>() < 1e-11) {
      const Eigen::VectorXd lambda = least_squares_multipliers(c_mat, r);
      sol.eq_multipliers = lambda.head(m_eq);
      double most_negative = -1e-9;
      int drop = -1;
      for (std::size_t w = 0; w < working.size(); ++w) {
        const double lw = lambda[m_eq + static_cast<Eigen::Index>(w)];
        if (lw < most_negative) {
          most_negative = lw;
          drop = static_cast<int>(w);
        }
      }
      if (drop < 0) {
        for (std::size_t w = 0; w < working.size(); ++w) {
          sol.in_multipliers[working[w]] =
              std::max(0.0, lambda[m_eq + static_cast<Eigen::Index>(w)]);
        }
        sol.active = working;
        return sol;
      }
      in_working[working[drop]] = 0;
      working.erase(working.begin() + drop);
      continue;
    }

    // Longest feasible step along p before an inactive inequality blocks.
    double alpha = 1.0;
    int blocker = -1;
    for (Eigen::Index i = 0; i < m_in; ++i) {
      if (in_working[i]) continue;
      const double ap = a_in.row(i).dot(p);
      if (ap >= -1e-13) continue;
      const double current = slack_in[i] + a_in.row(i).dot(sol.d);
      const double limit = current / (-ap);
      if (limit < alpha) {
        alpha = std::max(limit, 0.0);
        blocker = static_cast<int>(i);
      }
    }
    sol.d += alpha * p;
    if (blocker >= 0) {
      working.push_back(blocker);
      in_working[blocker] = 1;
    }
  }
  // Iteration cap: return the (feasible) progress made so far.
  sol.active = working;
  return sol;
}

const char* to_string(SqpStatus status) {
  switch (status) {
    case SqpStatus::ConvergedKkt:
      return "converged_kkt";
    case SqpStatus::ConvergedSmallChange:
      return "converged_small_change";
    case SqpStatus::IterationCap:
      return "iteration_cap";
    case SqpStatus::LineSearchFailed:
      return "line_search_failed";
  }
  return "unknown";
}

SqpResult sqp_minimize(const Objective& f, Eigen::VectorXd x, const LinearConstraints& con,
                       const SqpOptions& opt) {
  const auto n = x.size();
  const auto m_eq = con.a_eq.rows();
  const auto m_in = con.a_in.rows();

  // Feasibility of the start, with an exact correction of equality drift.
  if (m_eq > 0) {
    Eigen::VectorXd res = con.b_eq - con.a_eq * x;
    if (res.lpNorm<Eigen::Infinity>() > 1e-6) {
      throw std::invalid_argument("sqp_minimize: start violates equality constraints");
    }
    x += con.a_eq.transpose() *
         (con.a_eq * con.a_eq.transpose()).ldlt().solve(res);
  }
  if (m_in > 0) {
    const Eigen::VectorXd slack = con.a_in * x - con.b_in;
    if (slack.minCoeff() < -opt.feasibility_tol) {
      throw std::invalid_argument("sqp_minimize: start violates inequality constraints");
    }
  }

  double fx = f(x);
  if (!std::isfinite(fx)) {
    throw std::invalid_argument("sqp_minimize: objective not finite at the start");
  }

  SqpResult result;
  result.objective_trace.push_back(fx);

  Eigen::MatrixXd b_mat = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd g = central_gradient(f, x, opt.fd_step);
  bool rescaled = false;
  bool reset_used = false;
  int small_change_streak = 0;

  auto finish = [&](SqpStatus status, int iter, double kkt) {
    result.x = x;
    result.f = fx;
    result.gradient = g;
    result.status = status;
    result.iterations = iter;
    if (m_in > 0) {
      const Eigen::VectorXd slack = con.a_in * x - con.b_in;
      for (Eigen::Index i = 0; i < m_in; ++i) {
        if (slack[i] < 1e-6) result.active_inequalities.push_back(static_cast<int>(i));
      }
    }
    if (!std::isfinite(kkt) && (m_eq > 0 || !result.active_inequalities.empty())) {
      // Residual against least-squares multipliers over the active rows.
      const auto m_act = static_cast<Eigen::Index>(result.active_inequalities.size());
      Eigen::MatrixXd c_mat(m_eq + m_act, n);
      if (m_eq > 0) c_mat.topRows(m_eq) = con.a_eq;
      for (Eigen::Index w = 0; w < m_act; ++w) {
        c_mat.row(m_eq + w) = con.a_in.row(result.active_inequalities[w]);
      }
      Eigen::VectorXd lambda = c_mat.transpose().colPivHouseholderQr().solve(g);
      for (Eigen::Index w = 0; w < m_act; ++w) {
        lambda[m_eq + w] = std::max(0.0, lambda[m_eq + w]);
      }
      kkt = (g - c_mat.transpose() * lambda).lpNorm<Eigen::Infinity>();
    } else if (!std::isfinite(kkt)) {
      kkt = g.lpNorm<Eigen::Infinity>();
    }
    result.kkt_residual = kkt;
    return result;
  };

  int iter = 0;
  for (; iter < opt.max_iterations; ++iter) {
    const Eigen::VectorXd slack =
        (m_in > 0) ? Eigen::VectorXd(con.a_in * x - con.b_in) : Eigen::VectorXd(0);
    QpSolution qp = solve_convex_qp(b_mat, g, con.a_eq, con.a_in, slack);

    // Stationarity residual of the KKT system at x.
    Eigen::VectorXd kkt_vec = g;
    if (m_eq > 0) kkt_vec -= con.a_eq.transpose() * qp.eq_multipliers;
    if (m_in > 0) kkt_vec -= con.a_in.transpose() * qp.in_multipliers;
    const double kkt = kkt_vec.lpNorm<Eigen::Infinity>();
    if (kkt < opt.kkt_tol) return finish(SqpStatus::ConvergedKkt, iter, kkt);

    const double dnorm = qp.d.lpNorm<Eigen::Infinity>();
    if (dnorm < 1e-11) return finish(SqpStatus::ConvergedKkt, iter, kkt);

    double dirderiv = g.dot(qp.d);
    if (dirderiv >= 0.0) {
      // The quadratic model went stale; restart it once.
      if (!reset_used) {
        reset_used = true;
        b_mat = Eigen::MatrixXd::Identity(n, n) *
                std::max(1e-4, std::abs(fx) / std::max(1.0, x.squaredNorm()));
        --iter;
        continue;
      }
      return finish(SqpStatus::LineSearchFailed, iter, kkt);
    }

    // Armijo backtracking; iterates stay feasible for any alpha in [0,1].
    constexpr double c1 = 1e-4;
    double alpha = 1.0;
    double f_new = kInf;
    bool accepted = false;
    for (int ls = 0; ls < opt.max_line_search; ++ls) {
      f_new = eval_or_inf(f, x + alpha * qp.d);
      if (f_new <= fx + c1 * alpha * dirderiv) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (kkt < 10.0 * opt.kkt_tol) {
        return finish(SqpStatus::ConvergedSmallChange, iter, kkt);
      }
      if (!reset_used) {
        reset_used = true;
        b_mat = Eigen::MatrixXd::Identity(n, n) *
                std::max(1e-4, std::abs(fx) / std::max(1.0, x.squaredNorm()));
        --iter;
        continue;
      }
      return finish(SqpStatus::LineSearchFailed, iter, kkt);
    }

    const Eigen::VectorXd x_new = x + alpha * qp.d;
    const Eigen::VectorXd g_new = central_gradient(f, x_new, opt.fd_step);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;

    const double improvement = fx - f_new;
    x = x_new;
    fx = f_new;
    g = g_new;
    result.objective_trace.push_back(fx);

    // Damped BFGS update (Powell's modification) keeps B positive definite.
    const double sy = s.dot(y);
    const Eigen::VectorXd bs = b_mat * s;
    const double sbs = s.dot(bs);
    if (sbs > 0.0) {
      if (!rescaled && sy > 1e-12) {
        b_mat = Eigen::MatrixXd::Identity(n, n) * (y.dot(y) / sy);
        rescaled = true;
      }
      const Eigen::VectorXd bs2 = b_mat * s;
      const double sbs2 = s.dot(bs2);
      double theta = 1.0;
      if (sy < 0.2 * sbs2) theta = 0.8 * sbs2 / (sbs2 - sy);
      const Eigen::VectorXd r = theta * y + (1.0 - theta) * bs2;
      const double sr = s.dot(r);
      if (sr > 1e-14 && sbs2 > 1e-14) {
        b_mat += (r * r.transpose()) / sr - (bs2 * bs2.transpose()) / sbs2;
      }
    }

    if (improvement < opt.objective_tol * (1.0 + std::abs(fx))) {
      if (++small_change_streak >= 2) {
        return finish(SqpStatus::ConvergedSmallChange, iter + 1,
                      std::numeric_limits<double>::quiet_NaN());
      }
    } else {
      small_change_streak = 0;
    }

    // Re-pin the equality constraints against arithmetic drift.
    if (m_eq > 0) {
      const Eigen::VectorXd res = con.b_eq - con.a_eq * x;
      if (res.lpNorm<Eigen::Infinity>() > 1e-13) {
        x += con.a_eq.transpose() * (con.a_eq * con.a_eq.transpose()).ldlt().solve(res);
      }
    }
  }
  return finish(SqpStatus::IterationCap, iter, std::numeric_limits<double>::quiet_NaN());
}

}  // namespace chopro
