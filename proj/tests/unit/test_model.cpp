#include <Eigen/QR>
#include <cmath>
#include <random>

#include "doctest.h"
#include "lamglass/errors.hpp"
#include "lamglass/model.hpp"

using namespace lamglass;

namespace {

LaminateModel small_model(Kinematics kin, SupportType support = SupportType::FixedEnd,
                          std::size_t elements = 4) {
  LaminateGeometry g;
  g.span = 0.6;
  g.width = 0.1;
  g.support = support;
  g.first_span = 0.3;
  return build_model(g, Materials{}, elements, kin);
}

Eigen::VectorXd random_state(const LaminateModel& m, std::mt19937& rng, double rot) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd d(m.dof_count());
  for (Eigen::Index i = 0; i < d.size(); ++i)
    d[i] = (i % 3 == 2) ? rot * u(rng) : 1e-3 * u(rng);
  return d;
}

std::vector<HistoryOffsets> random_offsets(const LaminateModel& m, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<HistoryOffsets> off(m.interlayer_element_count());
  for (auto& o : off) o = {50 * u(rng), 20 * u(rng), 0.05 * u(rng)};
  return off;
}

SectionStiffness interlayer_stiffness(const LaminateModel& m) {
  const auto il = m.interlayer_index();
  return SectionStiffness::of(m.layers()[*il].props,
                              elastic_moduli(4e5, m.materials().closure));
}

}  // namespace

TEST_CASE("dof and constraint counts") {
  const LaminateModel m = build_model(LaminateGeometry{}, Materials{}, 500);
  CHECK(m.nodes() == 501);
  CHECK(m.dof_count() == 4509);
  CHECK(m.constraint_count() == 2004);
  CHECK(m.element_length() == doctest::Approx(3.0 / 500));
  CHECK(m.output_node() == 250);
  CHECK(m.interlayer_index() == 1u);
  CHECK(m.interlayer_element_count() == 500);
  CHECK(m.min_thickness() == doctest::Approx(0.00076));
  // layer-major numbering is a bijection
  std::vector<int> seen(m.dof_count(), 0);
  for (std::size_t l = 0; l < 3; ++l)
    for (std::size_t n = 0; n < m.nodes(); ++n)
      for (Component c : {Component::U, Component::W, Component::Phi}) ++seen[m.dof(l, n, c)];
  for (int s : seen) CHECK(s == 1);
}

TEST_CASE("invalid geometry") {
  LaminateGeometry g;
  CHECK_THROWS_AS(build_model(g, Materials{}, 1), ConfigError);
  CHECK_THROWS_AS(build_model(g, Materials{}, 5), ConfigError);
  g.thickness[0] = -0.003;
  try {
    build_model(g, Materials{}, 10);
    FAIL("expected a configuration error");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "thickness[1]");
  }
  g = LaminateGeometry{};
  g.span = 0.0;
  CHECK_THROWS_AS(build_model(g, Materials{}, 10), ConfigError);
  g = LaminateGeometry{};
  g.support = SupportType::TwoSpanContinuous;
  g.first_span = 3.0;
  CHECK_THROWS_AS(build_model(g, Materials{}, 10), ConfigError);
}

TEST_CASE("supports") {
  const auto fixed = small_model(Kinematics::VonKarman);
  std::size_t count = 0;
  for (bool f : fixed.fixed()) count += f;
  CHECK(count == 18);
  CHECK(fixed.free_dof_count() == fixed.dof_count() - 18);

  const auto simple = small_model(Kinematics::VonKarman, SupportType::SimplySupported);
  CHECK(simple.fixed()[simple.dof(1, 0, Component::W)]);
  CHECK(simple.fixed()[simple.dof(1, 4, Component::W)]);
  CHECK(simple.fixed()[simple.dof(1, 2, Component::U)]);
  CHECK(simple.free_dof_count() == simple.dof_count() - 3);

  const auto two = small_model(Kinematics::VonKarman, SupportType::TwoSpanContinuous, 8);
  CHECK(two.fixed()[two.dof(1, 4, Component::W)]);
  CHECK(two.output_node() == 2);
}

TEST_CASE("external load") {
  LaminateGeometry g;
  g.span = 3.0;
  const auto m = build_model(g, Materials{}, 2);
  const Eigen::VectorXd f = m.external_load(10.0);
  CHECK(f[m.dof(0, 0, Component::W)] == doctest::Approx(7.5));
  CHECK(f[m.dof(0, 1, Component::W)] == doctest::Approx(15.0));
  CHECK(f[m.dof(0, 2, Component::W)] == doctest::Approx(7.5));
  CHECK(f.sum() == doctest::Approx(30.0));
  CHECK(m.external_load(0.0).norm() == 0.0);
  const auto big = build_model(g, Materials{}, 500);
  CHECK(big.external_load(10.0).sum() == doctest::Approx(30.0).epsilon(1e-13));
}

TEST_CASE("compatibility") {
  std::mt19937 rng(17);
  for (Kinematics k : {Kinematics::VonKarman, Kinematics::FiniteStrain, Kinematics::Linear}) {
    const auto m = small_model(k);
    Eigen::VectorXd c;
    SparseMatrix jac;
    m.compatibility(Eigen::VectorXd::Zero(m.dof_count()), c, jac);
    CHECK(c.size() == 20);
    CHECK(c.norm() <= 1e-15);
    if (k != Kinematics::FiniteStrain) {
      const Eigen::VectorXd d = random_state(m, rng, 0.05);
      Eigen::VectorXd c2;
      SparseMatrix jac2;
      m.compatibility(d, c2, jac2);
      CHECK((c2 - jac * d).norm() <= 1e-15 * d.norm());
      CHECK((Eigen::MatrixXd(jac2) - Eigen::MatrixXd(jac)).norm() == 0.0);
    }
  }
}

TEST_CASE("finite strain compatibility matches von Karman to second order") {
  std::mt19937 rng(19);
  const auto fs = small_model(Kinematics::FiniteStrain);
  const auto vk = small_model(Kinematics::VonKarman);
  const Eigen::VectorXd d = random_state(fs, rng, 1.0);
  double prev = 0.0;
  for (double a : {1e-1, 1e-2, 1e-3}) {
    Eigen::VectorXd cf, cv;
    SparseMatrix jf, jv;
    fs.compatibility(a * d, cf, jf);
    vk.compatibility(a * d, cv, jv);
    const double diff = (cf - cv).norm();
    if (prev > 0.0) CHECK(diff < 0.02 * prev);
    prev = diff;
  }
}

TEST_CASE("constraint Jacobian has full row rank") {
  std::mt19937 rng(23);
  for (Kinematics k : {Kinematics::VonKarman, Kinematics::FiniteStrain}) {
    const auto m = small_model(k);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd c;
      SparseMatrix jac;
      m.compatibility(random_state(m, rng, 1.2), c, jac);
      const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd(jac).transpose());
      CHECK(qr.rank() == static_cast<Eigen::Index>(m.constraint_count()));
    }
  }
}

TEST_CASE("assembly") {
  std::mt19937 rng(29);
  for (Kinematics k : {Kinematics::VonKarman, Kinematics::FiniteStrain, Kinematics::Linear}) {
    const auto m = small_model(k);
    const auto stiff = interlayer_stiffness(m);
    const std::vector<HistoryOffsets> none(m.interlayer_element_count());
    Eigen::VectorXd f;
    SparseMatrix kmat;
    m.assemble(Eigen::VectorXd::Zero(m.dof_count()), stiff, none, &f, &kmat);
    CHECK(f.norm() == 0.0);

    const Eigen::VectorXd d = random_state(m, rng, 0.2);
    m.assemble(d, stiff, none, &f, &kmat);
    const Eigen::MatrixXd kd(kmat);
    const auto n = static_cast<Eigen::Index>(m.nodes() * 3);
    double coupling = 0.0;
    for (Eigen::Index a = 0; a < kd.rows(); ++a)
      for (Eigen::Index b = 0; b < kd.cols(); ++b)
        if (a / n != b / n) coupling = std::max(coupling, std::abs(kd(a, b)));
    CHECK(coupling == 0.0);

    // history enters linearly
    const auto off = random_offsets(m, rng);
    std::vector<HistoryOffsets> off2 = off;
    for (auto& o : off2) o = {2 * o.dn, 2 * o.dv, 2 * o.dm};
    Eigen::VectorXd f1, f2;
    m.assemble(d, stiff, off, &f1, nullptr);
    m.assemble(d, stiff, off2, &f2, nullptr);
    CHECK(((f2 - f1) - (f1 - f)).norm() <= 1e-12 * f.norm());
  }
}

TEST_CASE("multiplier stiffness") {
  std::mt19937 rng(31);
  const auto vk = small_model(Kinematics::VonKarman);
  const Eigen::VectorXd lambda = Eigen::VectorXd::Random(vk.constraint_count());
  CHECK(Eigen::MatrixXd(vk.multiplier_stiffness(random_state(vk, rng, 0.3), lambda)).norm() == 0.0);
}

TEST_CASE("glass stress projection") {
  // uniform curvature: constant stress everywhere, projection reproduces it
  const auto m = small_model(Kinematics::Linear, SupportType::FixedEnd, 8);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(m.dof_count());
  const double kappa = 0.01;
  for (std::size_t n = 0; n < m.nodes(); ++n) d[m.dof(0, n, Component::Phi)] = kappa * m.node_x(n);
  const auto s = m.glass_stress(d, 0);
  const double h = m.layers()[0].props.thickness;
  for (const auto& v : s) {
    CHECK(v.top == doctest::Approx(-72e9 * kappa * h / 2).epsilon(1e-12));
    CHECK(v.bottom == doctest::Approx(72e9 * kappa * h / 2).epsilon(1e-12));
  }
  // mean deflection over layers
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m.dof_count());
  w[m.dof(0, m.output_node(), Component::W)] = 3.0;
  CHECK(m.output_deflection(w) == doctest::Approx(1.0));
}
