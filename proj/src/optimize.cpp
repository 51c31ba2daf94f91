#include "lqs/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lqs {

NelderMeadResult nelder_mead(const Objective& f, const RVec& x0, const NelderMeadOptions& opts) {
  const Index n = x0.size();
  NelderMeadResult res;
  int evals = 0;
  auto eval = [&](const RVec& x) {
    ++evals;
    return f(x);
  };

  std::vector<RVec> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  val[0] = eval(x0);
  if (!std::isfinite(val[0])) {
    throw std::invalid_argument("nelder_mead: objective is not finite at the start point");
  }
  for (Index i = 0; i < n; ++i) {
    pts[i + 1](i) += opts.initial_step * std::max(1.0, std::abs(x0(i)));
    val[i + 1] = eval(pts[i + 1]);
  }

  const int max_evals = opts.max_evals_per_dim * static_cast<int>(std::max<Index>(1, n));
  auto order = [&] {
    std::vector<Index> idx(n + 1);
    for (Index i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](Index a, Index b) { return val[a] < val[b]; });
    std::vector<RVec> p2(n + 1);
    std::vector<double> v2(n + 1);
    for (Index i = 0; i <= n; ++i) {
      p2[i] = pts[idx[i]];
      v2[i] = val[idx[i]];
    }
    pts.swap(p2);
    val.swap(v2);
  };

  while (evals < max_evals) {
    order();
    double diam = 0.0;
    for (Index i = 1; i <= n; ++i) diam = std::max(diam, (pts[i] - pts[0]).norm());
    if (diam <= opts.simplex_tol) {
      res.converged = true;
      break;
    }
    RVec centroid = RVec::Zero(n);
    for (Index i = 0; i < n; ++i) centroid += pts[i];
    centroid /= static_cast<double>(n);

    const RVec xr = centroid + (centroid - pts[n]);
    const double fr = eval(xr);
    if (fr < val[0]) {
      const RVec xe = centroid + 2.0 * (centroid - pts[n]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[n] = xe;
        val[n] = fe;
      } else {
        pts[n] = xr;
        val[n] = fr;
      }
    } else if (fr < val[n - 1]) {
      pts[n] = xr;
      val[n] = fr;
    } else {
      const bool outside = fr < val[n];
      const RVec xc = outside ? RVec(centroid + 0.5 * (centroid - pts[n]))
                              : RVec(centroid - 0.5 * (centroid - pts[n]));
      const double fc = eval(xc);
      if (fc < std::min(fr, val[n])) {
        pts[n] = xc;
        val[n] = fc;
      } else {
        for (Index i = 1; i <= n; ++i) {
          pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
          val[i] = eval(pts[i]);
        }
      }
    }
  }
  order();
  res.x = pts[0];
  res.f = val[0];
  res.evaluations = evals;
  return res;
}

Objective penalized(const Objective& f, const std::function<CMat(const RVec&)>& drift_of) {
  return [f, drift_of](const RVec& x) {
    const double abscissa = spectral_abscissa(drift_of(x));
    if (abscissa >= 0.0) return 1e6 + abscissa;
    return f(x);
  };
}

GridResult grid_search(const Objective& f, const RVec& lo, const RVec& hi,
                       const std::vector<Index>& steps) {
  const Index d = lo.size();
  if (hi.size() != d || static_cast<Index>(steps.size()) != d) {
    throw std::invalid_argument("grid_search: dimension mismatch");
  }
  Index total = 1;
  for (Index s : steps) {
    if (s < 1) throw std::invalid_argument("grid_search: empty grid");
    total *= s;
  }
  GridResult best;
  best.f = std::numeric_limits<double>::infinity();
  std::vector<Index> idx(d, 0);
  RVec x(d);
  for (Index count = 0; count < total; ++count) {
    for (Index k = 0; k < d; ++k) {
      x(k) = steps[k] == 1 ? lo(k)
                           : lo(k) + (hi(k) - lo(k)) * static_cast<double>(idx[k]) /
                                         static_cast<double>(steps[k] - 1);
    }
    const double v = f(x);
    if (v < best.f) {
      best.f = v;
      best.x = x;
      best.index = idx;
    }
    for (Index k = d - 1; k >= 0; --k) {
      if (++idx[k] < steps[k]) break;
      idx[k] = 0;
    }
  }
  return best;
}

}  // namespace lqs
