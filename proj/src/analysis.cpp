#include "hps/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hps/error.hpp"
#include "hps/spectral.hpp"

namespace hps {

namespace {

// Lagrange extrapolation of values at nodes xs to the point x.
template <class Scalar>
Scalar lagrange(const std::vector<double>& xs, const std::vector<Scalar>& vs, double x) {
  Scalar sum(0);
  for (size_t i = 0; i < xs.size(); ++i) {
    double w = 1.0;
    for (size_t j = 0; j < xs.size(); ++j)
      if (j != i) w *= (x - xs[j]) / (xs[i] - xs[j]);
    sum += w * vs[i];
  }
  return sum;
}

// Full p x p (or p) leaf grid with corners filled by edge extrapolation.
template <class Scalar>
Matrix<Scalar> leaf_grid(const Mesh& mesh, const LeafInfo& leaf, const Field<Scalar>& u) {
  const int p = mesh.order();
  if (mesh.dim() == 1) {
    Matrix<Scalar> g(p, 1);
    for (int k = 0; k < leaf.n_active(); ++k) g(leaf.grid[k], 0) = u(leaf.global[k]);
    return g;
  }
  Matrix<Scalar> g = Matrix<Scalar>::Zero(p, p);  // g(i, j)
  for (int k = 0; k < leaf.n_active(); ++k) g(leaf.grid[k] % p, leaf.grid[k] / p) = u(leaf.global[k]);
  const auto nodes = spectral::cheb_nodes(p);
  const std::vector<double> inner(nodes.begin() + 1, nodes.end() - 1);
  for (int ci : {0, p - 1})
    for (int cj : {0, p - 1}) {
      std::vector<Scalar> along_x, along_y;
      for (int k = 1; k < p - 1; ++k) {
        along_x.push_back(g(k, cj));
        along_y.push_back(g(ci, k));
      }
      g(ci, cj) = 0.5 * (lagrange(inner, along_x, nodes[ci]) + lagrange(inner, along_y, nodes[cj]));
    }
  return g;
}

int locate(double v, double lo, double h, int n) {
  return std::clamp(static_cast<int>(std::floor((v - lo) / h)), 0, n - 1);
}

template <class Scalar>
Scalar eval_grid(const Mesh& mesh, const Matrix<Scalar>& g, const Box& box, double x, double y) {
  const int p = mesh.order();
  const double sx = 2.0 * (x - box.x0) / (box.x1 - box.x0) - 1.0;
  const Eigen::RowVectorXd rx = spectral::cheb_interp_row(p, std::clamp(sx, -1.0, 1.0));
  if (mesh.dim() == 1) return (rx.cast<Scalar>() * g.col(0))(0);
  const double sy = 2.0 * (y - box.y0) / (box.y1 - box.y0) - 1.0;
  const Eigen::RowVectorXd ry = spectral::cheb_interp_row(p, std::clamp(sy, -1.0, 1.0));
  return (rx.cast<Scalar>() * g * ry.transpose().cast<Scalar>())(0);
}

}  // namespace

template <class Scalar>
double max_error(const Field<Scalar>& a, const Field<Scalar>& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("max_error: fields of size " + std::to_string(a.size()) + " and " +
                            std::to_string(b.size()) + "; interpolate first");
  return a.size() ? (a - b).cwiseAbs().template maxCoeff<Eigen::PropagateNaN>() : 0.0;
}

template <class Scalar>
double max_error(const State<Scalar>& a, const State<Scalar>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("max_error: component counts differ");
  double e = 0.0;
  for (size_t c = 0; c < a.size(); ++c) {
    const double v = max_error(a[c], b[c]);
    if (!(v <= e)) e = v;  // keeps NaN
  }
  return e;
}

template <class Scalar>
Scalar evaluate(const Mesh& mesh, const Field<Scalar>& u, double x, double y) {
  const Box& d = mesh.domain();
  const int ix = locate(x, d.x0, mesh.hx(), mesh.n1());
  const int iy = mesh.dim() == 1 ? 0 : locate(y, d.y0, mesh.hy(), mesh.n2());
  const auto& leaf = mesh.leaf(mesh.leaf_index(ix, iy));
  return eval_grid(mesh, leaf_grid(mesh, leaf, u), leaf.box, x, y);
}

template <class Scalar>
Field<Scalar> interpolate(const Mesh& from, const Field<Scalar>& u, const Mesh& to) {
  if (u.size() != from.size()) throw DimensionMismatch("interpolate: field does not match the source mesh");
  if (from.dim() != to.dim()) throw DimensionMismatch("interpolate: meshes differ in dimension");
  std::vector<Matrix<Scalar>> grids(from.num_leaves());
  for (int l = 0; l < from.num_leaves(); ++l) grids[l] = leaf_grid(from, from.leaf(l), u);
  const Box& d = from.domain();
  Field<Scalar> out(to.size());
  for (int id = 0; id < to.size(); ++id) {
    const auto& nd = to.node(id);
    const int ix = locate(nd.x, d.x0, from.hx(), from.n1());
    const int iy = from.dim() == 1 ? 0 : locate(nd.y, d.y0, from.hy(), from.n2());
    const int l = from.leaf_index(ix, iy);
    out(id) = eval_grid(from, grids[l], from.leaf(l).box, nd.x, nd.y);
  }
  return out;
}

ConvergenceSeries fit_rate(const std::vector<double>& resolution, const std::vector<double>& error,
                           const FitOptions& options) {
  if (resolution.size() != error.size()) throw DimensionMismatch("fit_rate: series lengths differ");
  ConvergenceSeries s;
  s.resolution = resolution;
  s.error = error;
  const size_t n = error.size();
  if (options.floor) {
    s.floor = *options.floor;
  } else if (n >= 2) {
    // order the points from coarse to fine by resolution
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return resolution[a] > resolution[b]; });
    const double finest = error[idx[n - 1]], before = error[idx[n - 2]];
    bool stalled = !(before >= options.stall_ratio * finest);
    if (!stalled && n >= 4) {
      double log_mean = 0.0;
      for (size_t i = 0; i + 2 < n; ++i) log_mean += std::log(error[idx[i]] / error[idx[i + 1]]) / (n - 2);
      stalled = before / finest < options.stall_fraction * std::exp(log_mean);
    }
    if (stalled) s.floor = *std::min_element(error.begin(), error.end());
  }
  s.used.assign(n, false);
  std::vector<double> lx, ly;
  for (size_t i = 0; i < n; ++i) {
    if (!(error[i] > 0.0) || !(resolution[i] > 0.0)) continue;
    if (s.floor > 0.0 && error[i] < options.floor_factor * s.floor) continue;
    s.used[i] = true;
    lx.push_back(std::log(resolution[i]));
    ly.push_back(std::log(error[i]));
  }
  if (static_cast<int>(lx.size()) < options.min_points)
    throw InsufficientData("fit_rate: " + std::to_string(lx.size()) + " usable points, need " +
                           std::to_string(options.min_points));
  const double m = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / m;
    my += ly[i] / m;
  }
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientData("fit_rate: resolutions are all equal");
  s.rate = sxy / sxx;
  double r2 = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (my + s.rate * (lx[i] - mx));
    r2 += r * r;
  }
  s.residual = std::sqrt(r2 / m);
  return s;
}

std::vector<double> pairwise_rates(const std::vector<double>& resolution, const std::vector<double>& error) {
  if (resolution.size() != error.size()) throw DimensionMismatch("pairwise_rates: series lengths differ");
  std::vector<double> out;
  for (size_t i = 0; i + 1 < error.size(); ++i)
    out.push_back(std::log(error[i] / error[i + 1]) / std::log(resolution[i] / resolution[i + 1]));
  return out;
}

template <class Scalar>
std::vector<std::vector<double>> ExtrapolationTable<Scalar>::errors(const State<Scalar>& reference) const {
  std::vector<std::vector<double>> e(value.size());
  for (size_t n = 0; n < value.size(); ++n)
    for (const auto& v : value[n]) e[n].push_back(max_error(v, reference));
  return e;
}

template <class Scalar>
ExtrapolationTable<Scalar> richardson(const std::vector<State<Scalar>>& solutions, int base_order) {
  if (solutions.empty()) throw InsufficientData("richardson: no solutions");
  if (base_order < 1) throw InvalidOrder("richardson: base order must be >= 1");
  for (const auto& s : solutions) {
    if (s.size() != solutions[0].size()) throw DimensionMismatch("richardson: component counts differ");
    for (size_t c = 0; c < s.size(); ++c)
      if (s[c].size() != solutions[0][c].size()) throw DimensionMismatch("richardson: inconsistent meshes");
  }
  ExtrapolationTable<Scalar> t;
  t.base_order = base_order;
  t.value.resize(solutions.size());
  for (size_t n = 0; n < solutions.size(); ++n) {
    t.value[n].push_back(solutions[n]);
    for (size_t k = 1; k <= n; ++k) {
      const double denom = std::pow(2.0, base_order + static_cast<int>(k) - 1) - 1.0;
      const auto& fine = t.value[n][k - 1];
      const auto& coarse = t.value[n - 1][k - 1];
      State<Scalar> next(fine.size());
      for (size_t c = 0; c < fine.size(); ++c) next[c] = fine[c] + (fine[c] - coarse[c]) / denom;
      t.value[n].push_back(std::move(next));
    }
  }
  return t;
}

#define HPS_INSTANTIATE(S)                                                                       \
  template double max_error(const Field<S>&, const Field<S>&);                                   \
  template double max_error(const State<S>&, const State<S>&);                                   \
  template S evaluate(const Mesh&, const Field<S>&, double, double);                             \
  template Field<S> interpolate(const Mesh&, const Field<S>&, const Mesh&);                      \
  template struct ExtrapolationTable<S>;                                                         \
  template ExtrapolationTable<S> richardson(const std::vector<State<S>>&, int);
HPS_INSTANTIATE(double)
HPS_INSTANTIATE(Complex)
#undef HPS_INSTANTIATE

}  // namespace hps
