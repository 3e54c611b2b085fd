#include "hps/solver.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "hps/error.hpp"
#include "hps/parallel.hpp"

namespace hps {

namespace {

template <class Scalar>
Field<Scalar> take(const Field<Scalar>& v, const std::vector<int>& idx) {
  Field<Scalar> out(static_cast<Eigen::Index>(idx.size()));
  for (size_t k = 0; k < idx.size(); ++k) out(static_cast<Eigen::Index>(k)) = v(idx[k]);
  return out;
}

template <class Scalar>
Matrix<Scalar> take(const Matrix<Scalar>& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix<Scalar> out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c)
    for (size_t r = 0; r < rows.size(); ++r) out(r, c) = m(rows[r], cols[c]);
  return out;
}

}  // namespace

template <class Scalar>
typename MergeOperator<Scalar>::Vec MergeOperator<Scalar>::interface_values(
    const Vec& g, const Vec& ha3, const Vec& hb3) const {
  return interface_map * g + interface_lu.solve(Vec(hb3 - ha3));
}

template <class Scalar>
typename MergeOperator<Scalar>::Vec MergeOperator<Scalar>::interface_values(
    const Vec& g, const Vec& ha3, const Vec& hb3, const Vec& hua3, const Vec& hub3, double dt) const {
  if (!(dt > 0.0)) throw Error("slope-corrected merge requires dt > 0");
  return interface_values(g, Vec(ha3 + hua3 / dt), Vec(hb3 + hub3 / dt));
}

template <class Scalar>
typename MergeOperator<Scalar>::Vec MergeOperator<Scalar>::parent_flux(const Vec& ha, const Vec& hb,
                                                                       Vec* w_out) const {
  const Vec rhs = take(hb, pos3b) - take(ha, pos3a);
  const Vec w = interface_lu.solve(rhs);
  Vec v(static_cast<Eigen::Index>(pos1.size() + pos2.size()));
  v.head(pos1.size()) = take(ha, pos1);
  v.tail(pos2.size()) = take(hb, pos2);
  v += propagate * w;
  if (w_out) *w_out = w;
  return v;
}

template <class Scalar>
int HpsFactorization<Scalar>::depth() const {
  int d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

template <class Scalar>
HpsFactorization<Scalar> HpsFactorization<Scalar>::build(const Mesh& mesh,
                                                         const ShiftedOperator<Scalar>& op,
                                                         int threads) {
  HpsFactorization f;
  f.mesh_ = &mesh;
  f.op_ = op;

  const auto st = spectral::leaf_stencil(mesh.order(), mesh.hx(), mesh.dim() == 2 ? mesh.hy() : 1.0,
                                         mesh.dim());
  f.leaf_ops_.resize(mesh.num_leaves());
  parallel_for(0, mesh.num_leaves(), threads, [&](int l) {
    const auto& leaf = mesh.leaf(l);
    f.leaf_ops_[l] = build_leaf_operators(collocate_leaf(st, op, leaf.box), leaf, st, mesh);
  });

  // Nested-dissection tree: bisect the longer side, vertical cut on ties.
  auto& nodes = f.nodes_;
  auto make = [&](auto&& self, int x0, int x1, int y0, int y1) -> int {
    TreeNode node;
    if (x1 - x0 == 1 && y1 - y0 == 1) {
      node.leaf = mesh.leaf_index(x0, y0);
      const auto& leaf = mesh.leaf(node.leaf);
      node.boundary.assign(leaf.global.begin() + leaf.n_interior, leaf.global.end());
    } else if (x1 - x0 >= y1 - y0) {
      const int mid = x0 + (x1 - x0) / 2;
      node.child = {self(self, x0, mid, y0, y1), self(self, mid, x1, y0, y1)};
    } else {
      const int mid = y0 + (y1 - y0) / 2;
      node.child = {self(self, x0, x1, y0, mid), self(self, x0, x1, mid, y1)};
    }
    if (node.leaf < 0) {
      node.level = 1 + std::max(nodes[node.child[0]].level, nodes[node.child[1]].level);
    }
    nodes.push_back(std::move(node));
    return static_cast<int>(nodes.size()) - 1;
  };
  make(make, 0, mesh.n1(), 0, mesh.n2());
  for (int k = static_cast<int>(nodes.size()) - 1; k >= 0; --k) {
    for (int c : nodes[k].child) {
      if (c >= 0) nodes[c].depth = nodes[k].depth + 1;
    }
  }

  // Index sets are cheap and needed before the numeric merges.
  for (auto& node : nodes) {
    if (node.leaf >= 0) continue;
    const auto& ba = nodes[node.child[0]].boundary;
    const auto& bb = nodes[node.child[1]].boundary;
    std::unordered_map<int, int> in_b;
    for (size_t k = 0; k < bb.size(); ++k) in_b.emplace(bb[k], static_cast<int>(k));
    std::vector<char> shared_b(bb.size(), 0);
    auto& m = node.merge;
    for (size_t k = 0; k < ba.size(); ++k) {
      auto it = in_b.find(ba[k]);
      if (it == in_b.end()) {
        m.pos1.push_back(static_cast<int>(k));
      } else {
        m.pos3a.push_back(static_cast<int>(k));
        m.pos3b.push_back(it->second);
        shared_b[it->second] = 1;
      }
    }
    for (size_t k = 0; k < bb.size(); ++k) {
      if (!shared_b[k]) m.pos2.push_back(static_cast<int>(k));
    }
    for (int k : m.pos1) node.boundary.push_back(ba[k]);
    for (int k : m.pos2) node.boundary.push_back(bb[k]);
  }

  std::vector<Matrix<Scalar>> dtn(nodes.size());
  int max_level = 0;
  for (size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].leaf >= 0) dtn[k] = f.leaf_ops_[nodes[k].leaf].dtn;
    max_level = std::max(max_level, nodes[k].level);
  }
  for (int level = 1; level <= max_level; ++level) {
    std::vector<int> batch;
    for (size_t k = 0; k < nodes.size(); ++k) {
      if (nodes[k].level == level) batch.push_back(static_cast<int>(k));
    }
    parallel_for(0, static_cast<int>(batch.size()), threads, [&](int b) {
      const int k = batch[b];
      auto& node = nodes[k];
      auto& m = node.merge;
      const int a = node.child[0];
      const int c = node.child[1];
      const Matrix<Scalar>& Ta = dtn[a];
      const Matrix<Scalar>& Tb = dtn[c];
      const Matrix<Scalar> diff = take(Ta, m.pos3a, m.pos3a) - take(Tb, m.pos3b, m.pos3b);
      m.interface_lu.compute(diff);
      const double rc = diff.size() ? m.interface_lu.rcond() : 1.0;
      if (!(rc > 1e-14)) {
        throw FactorizationError("singular interface system at tree level " +
                                 std::to_string(node.depth) + ", node " + std::to_string(k) +
                                 " (rcond=" + std::to_string(rc) + ")");
      }
      const auto n1 = static_cast<Eigen::Index>(m.pos1.size());
      const auto n2 = static_cast<Eigen::Index>(m.pos2.size());
      const auto n3 = static_cast<Eigen::Index>(m.pos3a.size());
      Matrix<Scalar> rhs(n3, n1 + n2);
      rhs.leftCols(n1) = -take(Ta, m.pos3a, m.pos1);
      rhs.rightCols(n2) = take(Tb, m.pos3b, m.pos2);
      m.interface_map = m.interface_lu.solve(rhs);
      m.propagate.resize(n1 + n2, n3);
      m.propagate.topRows(n1) = take(Ta, m.pos1, m.pos3a);
      m.propagate.bottomRows(n2) = take(Tb, m.pos2, m.pos3b);
      Matrix<Scalar> T = Matrix<Scalar>::Zero(n1 + n2, n1 + n2);
      T.topLeftCorner(n1, n1) = take(Ta, m.pos1, m.pos1);
      T.bottomRightCorner(n2, n2) = take(Tb, m.pos2, m.pos2);
      T.noalias() += m.propagate * m.interface_map;
      dtn[k] = std::move(T);
    });
    for (int k : batch) {
      dtn[nodes[k].child[0]] = Matrix<Scalar>();
      dtn[nodes[k].child[1]] = Matrix<Scalar>();
    }
  }
  f.root_dtn_ = std::move(dtn.back());
  return f;
}

template <class Scalar>
struct HpsFactorization<Scalar>::Workspace {
  std::vector<Vec> flux;        // particular flux per tree node
  std::vector<Vec> interface;   // particular interface values per internal node
  std::vector<Vec> particular;  // particular interior solution per leaf
};

template <class Scalar>
void HpsFactorization<Scalar>::upward(const SolveRequest<Scalar>& req, Workspace& ws) const {
  const Mesh& mesh = *mesh_;
  ws.flux.assign(nodes_.size(), Vec());
  ws.interface.assign(nodes_.size(), Vec());
  ws.particular.assign(mesh.num_leaves(), Vec());
  const bool corrected = req.mode == SolveMode::SlopeCorrected;
  for (size_t k = 0; k < nodes_.size(); ++k) {
    const auto& node = nodes_[k];
    if (node.leaf >= 0) {
      const auto& leaf = mesh.leaf(node.leaf);
      const auto& ops = leaf_ops_[node.leaf];
      Vec f(leaf.n_interior);
      for (int r = 0; r < leaf.n_interior; ++r) f(r) = req.load(leaf.global[r]);
      ws.particular[node.leaf] = ops.particular(f);
      ws.flux[k] = ops.particular_flux(ws.particular[node.leaf]);
      if (corrected) ws.flux[k] += ops.flux(gather(leaf, *req.previous)) / req.dt;
    } else {
      ws.flux[k] = node.merge.parent_flux(ws.flux[node.child[0]], ws.flux[node.child[1]],
                                          &ws.interface[k]);
    }
  }
}

template <class Scalar>
typename HpsFactorization<Scalar>::Vec HpsFactorization<Scalar>::solve(
    const SolveRequest<Scalar>& req) const {
  const Mesh& mesh = *mesh_;
  const int n = mesh.size();
  if (req.load.size() != n || req.dirichlet.size() != n) {
    throw DimensionMismatch("solve request has size " + std::to_string(req.load.size()) + "/" +
                            std::to_string(req.dirichlet.size()) + ", mesh has " +
                            std::to_string(n) + " nodes");
  }
  if (req.mode == SolveMode::SlopeCorrected) {
    if (!(req.dt > 0.0)) throw Error("slope-corrected solve requires dt > 0");
    if (req.previous == nullptr || req.previous->size() != n) {
      throw DimensionMismatch("slope-corrected solve requires a previous field of mesh size");
    }
  }

  Workspace ws;
  upward(req, ws);

  Vec out = Vec::Zero(n);
  std::vector<Vec> bvals(nodes_.size());
  bvals.back() = take(req.dirichlet, nodes_.back().boundary);
  for (int k = static_cast<int>(nodes_.size()) - 1; k >= 0; --k) {
    const auto& node = nodes_[k];
    const Vec& g = bvals[k];
    if (node.leaf >= 0) {
      const auto& leaf = mesh.leaf(node.leaf);
      const Vec ui = leaf_ops_[node.leaf].interior(g, ws.particular[node.leaf]);
      for (int r = 0; r < leaf.n_interior; ++r) out(leaf.global[r]) = ui(r);
      for (int r = 0; r < leaf.n_boundary(); ++r) out(leaf.global[leaf.n_interior + r]) = g(r);
      continue;
    }
    const auto& m = node.merge;
    const Vec u3 = m.interface_map * g + ws.interface[k];
    const auto n1 = m.pos1.size();
    Vec ga(static_cast<Eigen::Index>(n1 + m.pos3a.size()));
    Vec gb(static_cast<Eigen::Index>(m.pos2.size() + m.pos3b.size()));
    for (size_t r = 0; r < n1; ++r) ga(m.pos1[r]) = g(r);
    for (size_t r = 0; r < m.pos2.size(); ++r) gb(m.pos2[r]) = g(n1 + r);
    for (size_t r = 0; r < m.pos3a.size(); ++r) {
      ga(m.pos3a[r]) = u3(r);
      gb(m.pos3b[r]) = u3(r);
    }
    bvals[node.child[0]] = std::move(ga);
    bvals[node.child[1]] = std::move(gb);
    bvals[k] = Vec();
  }
  return out;
}

template <class Scalar>
typename HpsFactorization<Scalar>::Vec HpsFactorization<Scalar>::root_particular_flux(
    const Vec& load) const {
  if (load.size() != mesh_->size()) throw DimensionMismatch("load does not match mesh");
  SolveRequest<Scalar> req;
  req.load = load;
  req.dirichlet = Vec::Zero(mesh_->size());
  Workspace ws;
  upward(req, ws);
  return ws.flux.back();
}

template <class Scalar>
Field<Scalar> solve_dirichlet(const HpsFactorization<Scalar>& fact, const Field<Scalar>& load,
                              const Field<Scalar>& dirichlet) {
  SolveRequest<Scalar> req;
  req.load = load;
  req.dirichlet = dirichlet;
  return fact.solve(req);
}

template struct MergeOperator<double>;
template struct MergeOperator<Complex>;
template class HpsFactorization<double>;
template class HpsFactorization<Complex>;
template Field<double> solve_dirichlet(const HpsFactorization<double>&, const Field<double>&,
                                       const Field<double>&);
template Field<Complex> solve_dirichlet(const HpsFactorization<Complex>&, const Field<Complex>&,
                                        const Field<Complex>&);

}  // namespace hps
