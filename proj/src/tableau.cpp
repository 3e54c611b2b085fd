#include "hps/tableau.hpp"

#include <functional>
#include <string>

#include "hps/error.hpp"

namespace hps {

namespace {

RealMatrix rows(int s, std::initializer_list<std::initializer_list<double>> data) {
  RealMatrix A = RealMatrix::Zero(s, s);
  int i = 0;
  for (const auto& row : data) {
    int j = 0;
    for (double v : row) A(i, j++) = v;
    ++i;
  }
  return A;
}

ImexTableau finish(int order, RealMatrix A, RealMatrix A_hat) {
  ImexTableau t;
  t.order = order;
  t.stages = static_cast<int>(A.rows());
  t.gamma = A(t.stages - 1, t.stages - 1);
  t.A = std::move(A);
  t.A_hat = std::move(A_hat);
  t.b = t.A.row(t.stages - 1).transpose();
  t.b_hat = t.b;
  t.c = t.A.rowwise().sum();
  t.c_hat = t.A_hat.rowwise().sum();
  return t;
}

// ARK3(2)4L[2]SA
ImexTableau ark3() {
  const double g = 1767732205903.0 / 4055673282236.0;
  const double b1 = 1471266399579.0 / 7840856788654.0;
  const double b2 = -4482444167858.0 / 7529755066697.0;
  const double b3 = 11266239266428.0 / 11593286722821.0;
  RealMatrix A = rows(4, {{0.0},
                          {g, g},
                          {2746238789719.0 / 10658868560708.0, -640167445237.0 / 6845629431997.0, g},
                          {b1, b2, b3, g}});
  RealMatrix Ah = rows(4, {{0.0},
                           {2.0 * g},
                           {5535828885825.0 / 10492691773637.0, 788022342437.0 / 10882634858940.0},
                           {6485989280629.0 / 16251701735622.0, -4246266847089.0 / 9704473918619.0,
                            10755448449292.0 / 10357097424841.0}});
  return finish(3, std::move(A), std::move(Ah));
}

// ARK4(3)6L[2]SA
ImexTableau ark4() {
  RealMatrix A = rows(6, {{0.0},
                          {0.25, 0.25},
                          {8611.0 / 62500.0, -1743.0 / 31250.0, 0.25},
                          {5012029.0 / 34652500.0, -654441.0 / 2922500.0, 174375.0 / 388108.0, 0.25},
                          {15267082809.0 / 155376265600.0, -71443401.0 / 120774400.0,
                           730878875.0 / 902184768.0, 2285395.0 / 8070912.0, 0.25},
                          {82889.0 / 524892.0, 0.0, 15625.0 / 83664.0, 69875.0 / 102672.0,
                           -2260.0 / 8211.0, 0.25}});
  RealMatrix Ah = rows(6, {{0.0},
                           {0.5},
                           {13861.0 / 62500.0, 6889.0 / 62500.0},
                           {-116923316275.0 / 2393684061468.0, -2731218467317.0 / 15368042101831.0,
                            9408046702089.0 / 11113171139209.0},
                           {-451086348788.0 / 2902428689909.0, -2682348792572.0 / 7519795681897.0,
                            12662868775082.0 / 11960479115383.0, 3355817975965.0 / 11060851509271.0},
                           {647845179188.0 / 3216320057751.0, 73281519250.0 / 8382639484533.0,
                            552539513391.0 / 3454668386233.0, 3354512671639.0 / 8306763924573.0,
                            4040.0 / 17871.0}});
  return finish(4, std::move(A), std::move(Ah));
}

// ARK5(4)8L[2]SA
ImexTableau ark5() {
  const double g = 41.0 / 200.0;
  RealMatrix A = rows(
      8, {{0.0},
          {g, g},
          {41.0 / 400.0, -567603406766.0 / 11931857230679.0, g},
          {683785636431.0 / 9252920307686.0, 0.0, -110385047103.0 / 1367015193373.0, g},
          {3016520224154.0 / 10081342136671.0, 0.0, 30586259806659.0 / 12414158314087.0,
           -22760509404356.0 / 11113319521817.0, g},
          {218866479029.0 / 1489978393911.0, 0.0, 638256894668.0 / 5436446318841.0,
           -1179710474555.0 / 5321154724896.0, -60928119172.0 / 8023461067671.0, g},
          {1020004230633.0 / 5715676835656.0, 0.0, 25762820946817.0 / 25263940353407.0,
           -2161375909145.0 / 9755907335909.0, -211217309593.0 / 5846859502534.0,
           -4269925059573.0 / 7827059040749.0, g},
          {-872700587467.0 / 9133579230613.0, 0.0, 0.0, 22348218063261.0 / 9555858737531.0,
           -1143369518992.0 / 8141816002931.0, -39379526789629.0 / 19018526304540.0,
           32727382324388.0 / 42900044865799.0, g}});
  RealMatrix Ah = rows(
      8, {{0.0},
          {41.0 / 100.0},
          {367902744464.0 / 2072280473677.0, 677623207551.0 / 8224143866563.0},
          {1268023523408.0 / 10340822734521.0, 0.0, 1029933939417.0 / 13636558850479.0},
          {14463281900351.0 / 6315353703477.0, 0.0, 66114435211212.0 / 5879490589093.0,
           -54053170152839.0 / 4284798021562.0},
          {14090043504691.0 / 34967701212078.0, 0.0, 15191511035443.0 / 11219624916014.0,
           -18461159152457.0 / 12425892160975.0, -281667163811.0 / 9011619295870.0},
          {19230459214898.0 / 13134317526959.0, 0.0, 21275331358303.0 / 2942455364971.0,
           -38145345988419.0 / 4862620318723.0, -1.0 / 8.0, -1.0 / 8.0},
          {-19977161125411.0 / 11928030595625.0, 0.0, -40795976796054.0 / 6384907823539.0,
           177454434618887.0 / 12078138498510.0, 782672205425.0 / 8267701900261.0,
           -69563011059811.0 / 9646580694205.0, 7356628210526.0 / 4942186776405.0}});
  return finish(5, std::move(A), std::move(Ah));
}

// A rooted tree whose nodes carry a color (which table links them to their
// parent); stored as root color plus child indices into a tree catalogue.
struct Tree {
  int color = 0;
  int size = 1;
  double density = 1.0;
  std::vector<int> children;
};

std::vector<Tree> catalogue(int colors, int order) {
  std::vector<Tree> trees;
  std::vector<std::vector<int>> by_size(order + 1);
  for (int n = 1; n <= order; ++n) {
    // children: non-decreasing catalogue indices with sizes summing to n - 1
    std::vector<std::vector<int>> child_sets;
    std::vector<int> current;
    std::function<void(int, int)> pick = [&](int remaining, int min_index) {
      if (remaining == 0) {
        child_sets.push_back(current);
        return;
      }
      for (int k = min_index; k < static_cast<int>(trees.size()); ++k) {
        if (trees[k].size > remaining) continue;
        current.push_back(k);
        pick(remaining - trees[k].size, k);
        current.pop_back();
      }
    };
    pick(n - 1, 0);
    for (int color = 0; color < colors; ++color) {
      for (const auto& cs : child_sets) {
        Tree t;
        t.color = color;
        t.size = n;
        t.children = cs;
        t.density = n;
        for (int k : cs) t.density *= trees[k].density;
        by_size[n].push_back(static_cast<int>(trees.size()));
        trees.push_back(std::move(t));
      }
    }
  }
  return trees;
}

double colored_residual(const std::vector<const RealMatrix*>& A, const std::vector<const Eigen::VectorXd*>& b,
                        int order) {
  const int colors = static_cast<int>(A.size());
  const auto trees = catalogue(colors, order);
  const auto s = A[0]->rows();
  std::vector<Eigen::VectorXd> psi(trees.size());
  double worst = 0.0;
  for (size_t k = 0; k < trees.size(); ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(s);
    for (int c : trees[k].children) v = v.cwiseProduct(*A[trees[c].color] * psi[c]);
    psi[k] = v;
    const double residual = b[trees[k].color]->dot(v) - 1.0 / trees[k].density;
    worst = std::max(worst, std::abs(residual));
  }
  return worst;
}

}  // namespace

ImexTableau load_tableau(int order) {
  switch (order) {
    case 3:
      return ark3();
    case 4:
      return ark4();
    case 5:
      return ark5();
    default:
      throw InvalidOrder("no additive Runge-Kutta tableau of order " + std::to_string(order));
  }
}

double order_condition_residual(const RealMatrix& A, const Eigen::VectorXd& b, int order) {
  return colored_residual({&A}, {&b}, order);
}

double additive_order_condition_residual(const ImexTableau& t, int order) {
  return colored_residual({&t.A, &t.A_hat}, {&t.b, &t.b_hat}, order);
}

int count_order_conditions(int colors, int order) {
  return static_cast<int>(catalogue(colors, order).size());
}

Complex stability_function(const ImexTableau& t, Complex z) {
  const int s = t.stages;
  const Matrix<Complex> M = Matrix<Complex>::Identity(s, s) - z * t.A.cast<Complex>();
  const Field<Complex> y = M.partialPivLu().solve(Field<Complex>::Ones(s));
  return 1.0 + z * t.b.cast<Complex>().dot(y);
}

Complex scalar_ode_step(const ImexTableau& t, Complex lambda, double dt, Complex u) {
  std::vector<Complex> k(t.stages);
  for (int i = 0; i < t.stages; ++i) {
    Complex arg = u;
    for (int j = 0; j < i; ++j) arg += dt * t.A(i, j) * k[j];
    k[i] = lambda * arg / (1.0 - dt * t.A(i, i) * lambda);
  }
  Complex next = u;
  for (int i = 0; i < t.stages; ++i) next += dt * t.b(i) * k[i];
  return next;
}

}  // namespace hps
