#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "rsadv/error.hpp"
#include "rsadv/recovery.hpp"

using namespace rsadv;

namespace {

Field random_field(const SpacePtr& s, std::mt19937& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Field f(s);
  for (int i = 0; i < s->n_dofs(); ++i) f.coeffs[i] = U(rng);
  return f;
}

MeshPtr mesh_for(const Quadruple& q, int n = 6) {
  return tag_dimension(q.v0) == 1 ? make_interval(n, 1.0) : make_quad(n, n, 1.0, 1.0, true);
}

double rel(const Field& a, const Field& b) { return l2_error(a, b) / std::max(l2_norm(b), 1e-300); }

}  // namespace

TEST_CASE("1D averaging of cell values") {
  const MeshPtr m = make_interval(3, 3.0);
  Field r(make_space(m, SpaceTag::DG0));
  r.coeffs << 0.0, 2.0, 4.0;
  const Field c = recover_average(r, make_space(m, SpaceTag::CG1));
  CHECK(c.coeffs[0] == 2.0);
  CHECK(c.coeffs[1] == 1.0);
  CHECK(c.coeffs[2] == 3.0);
}

TEST_CASE("contributors") {
  const MeshPtr m = make_quad(4, 4, 1.0, 1.0, true);
  const auto t = make_space(m, SpaceTag::CG1xCG1);
  const auto counts = contributor_counts(*t);
  for (int i = 0; i < t->n_dofs(); ++i) {
    const double z = t->dof_coords(i).y();
    CHECK(counts[i] == (z == 0.0 || z == 1.0 ? 2 : 4));
  }
  const auto dz = make_space(m, SpaceTag::DG0xCG1);
  const auto dz_counts = contributor_counts(*dz);
  for (int i = 0; i < dz->n_dofs(); ++i) {
    const double z = dz->dof_coords(i).y();
    CHECK(dz_counts[i] == (z == 0.0 || z == 1.0 ? 1 : 2));
  }
}

TEST_CASE("averaging preserves constants") {
  for (const auto& q : supported_quadruples()) {
    const MeshPtr m = mesh_for(q);
    Field r(make_space(m, q.v0));
    r.coeffs.setConstant(1.7);
    const Field a = recover_average(r, make_space(m, q.vt));
    CHECK((a.coeffs.array() - 1.7).abs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("averaging reproduces x+z at interior vertices") {
  const MeshPtr m = make_quad(5, 5, 1.0, 1.0, false);
  const auto v0 = make_space(m, SpaceTag::DG0xDG0);
  const Field r = project_analytic([](double x, double z) { return x + z; }, v0);
  const auto vt = make_space(m, SpaceTag::CG1xCG1);
  const Field a = recover_average(r, vt);
  for (int i = 0; i < vt->n_dofs(); ++i) {
    const Vec2 p = vt->dof_coords(i);
    if (p.x() == 0.0 || p.x() == 1.0 || p.y() == 0.0 || p.y() == 1.0) continue;
    CHECK(a.coeffs[i] == doctest::Approx(p.x() + p.y()).epsilon(1e-14));
  }
}

TEST_CASE("unsupported recovery pairs are rejected") {
  const MeshPtr m = make_quad(3, 3, 1.0, 1.0, true);
  Field r(make_space(m, SpaceTag::DG1xDG1));
  try {
    recover_average(r, make_space(m, SpaceTag::DG0xDG0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedPair);
  }
}

TEST_CASE("boundary recovery of a linear column") {
  const MeshPtr m = make_quad(2, 2, 1.0, 1.0, true);
  Field r(make_space(m, SpaceTag::DG0xDG0));
  for (int c = 0; c < 4; ++c) r.coeffs[c] = m->cell_iz(c) == 0 ? 0.25 : 0.75;
  const auto vt = make_space(m, SpaceTag::CG1xCG1);
  const Field b = recover_with_boundary(r, vt);
  for (int i = 0; i < vt->n_dofs(); ++i) CHECK(std::abs(b.coeffs[i] - vt->dof_coords(i).y()) <= 1e-13);
  const Field a = recover_average(r, vt);
  CHECK(std::abs(a.coeffs[0] - 0.25) < 1e-15);
}

TEST_CASE("boundary recovery preserves constants") {
  for (const bool periodic : {true, false}) {
    const MeshPtr m = make_quad(4, 3, 1.0, 1.0, periodic);
    Field r(make_space(m, SpaceTag::DG0xDG0));
    r.coeffs.setConstant(-2.5);
    const Field b = recover_with_boundary(r, make_space(m, SpaceTag::CG1xCG1));
    CHECK((b.coeffs.array() + 2.5).abs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("boundary recovery restores second order for z squared") {
  const ScalarFunction f = [](double, double z) { return z * z; };
  std::vector<double> with, without;
  for (const int n : {10, 20, 40, 80}) {
    const MeshPtr m = make_quad(n, n, 1.0, 1.0, true);
    const Field r = project_analytic(f, make_space(m, SpaceTag::DG0xDG0));
    const auto vt = make_space(m, SpaceTag::CG1xCG1);
    with.push_back(l2_error(recover_with_boundary(r, vt), f));
    without.push_back(l2_error(recover_average(r, vt), f));
  }
  const double slope_with = std::log2(with[2] / with[3]);
  const double slope_without = std::log2(without[2] / without[3]);
  CHECK(slope_with == doctest::Approx(2.0).epsilon(0.05));
  CHECK(slope_without < 1.9);
  for (std::size_t i = 0; i < with.size(); ++i) CHECK(with[i] < without[i]);
}

TEST_CASE("broken projection") {
  const MeshPtr m = make_interval(4, 1.0);
  Field c(make_space(m, SpaceTag::CG1));
  c.coeffs << 1.0, 3.0, -1.0, 5.0;
  const Field p = project_broken(c, make_space(m, SpaceTag::DG0));
  CHECK(p.coeffs[0] == doctest::Approx(2.0));
  CHECK(p.coeffs[1] == doctest::Approx(1.0));
  CHECK(p.coeffs[2] == doctest::Approx(2.0));
  CHECK(p.coeffs[3] == doctest::Approx(3.0));

  c.coeffs.setConstant(0.3);
  const Field q = project_broken(c, make_space(m, SpaceTag::DG0));
  CHECK((q.coeffs.array() - 0.3).abs().maxCoeff() < 1e-15);

  std::mt19937 rng(5);
  for (const auto& quad : supported_quadruples()) {
    const MeshPtr mm = mesh_for(quad);
    for (int trial = 0; trial < 10; ++trial) {
      const Field v = random_field(make_space(mm, quad.vt), rng);
      CHECK(l2_norm(project_broken(v, make_space(mm, quad.vh))) <= l2_norm(v) * (1.0 + 1e-14));
    }
  }
  CHECK_THROWS_AS(project_broken(c, make_space(m, SpaceTag::CG1)), Error);
}

TEST_CASE("injection") {
  const MeshPtr m = make_interval(3, 1.0);
  Field d0(make_space(m, SpaceTag::DG0));
  d0.coeffs.setConstant(5.0);
  const Field i0 = inject(d0, make_space(m, SpaceTag::DG1));
  CHECK((i0.coeffs.array() - 5.0).abs().maxCoeff() == 0.0);

  Field c(make_space(m, SpaceTag::CG1));
  c.coeffs << 1.0, 2.0, 3.0;
  const auto v1 = make_space(m, SpaceTag::DG1);
  const Field ic = inject(c, v1);
  for (int cell = 0; cell < 3; ++cell) {
    CHECK(ic.coeffs[v1->dof_map(cell)[0]] == c.coeffs[cell]);
    CHECK(ic.coeffs[v1->dof_map(cell)[1]] == c.coeffs[(cell + 1) % 3]);
  }

  std::mt19937 rng(11);
  for (const auto& q : supported_quadruples()) {
    const MeshPtr mm = mesh_for(q);
    const auto target = make_space(mm, q.v1);
    for (const SpaceTag src : {q.v0, q.vt, q.vh}) {
      const Field f = random_field(make_space(mm, src), rng);
      CHECK(l2_norm(inject(f, target)) == doctest::Approx(l2_norm(f)).epsilon(1e-13));
    }
  }
  try {
    inject(Field(v1), make_space(m, SpaceTag::DG0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonEmbeddable);
  }
}

TEST_CASE("global L2 projection") {
  const MeshPtr m = make_interval(4, 1.0);
  const auto v1 = make_space(m, SpaceTag::DG1);
  Field saw(v1);
  for (int c = 0; c < 4; ++c) saw.coeffs[v1->dof_map(c)[1]] = 1.0;
  const Field p = project_PA(saw, make_space(m, SpaceTag::DG0));
  CHECK((p.coeffs.array() - 0.5).abs().maxCoeff() < 1e-14);

  std::mt19937 rng(7);
  for (const auto& q : supported_quadruples()) {
    const MeshPtr mm = mesh_for(q);
    const auto v0 = make_space(mm, q.v0);
    const auto w1 = make_space(mm, q.v1);
    const Field r = random_field(v0, rng);
    CHECK(rel(project_PA(inject(r, w1), v0), r) <= 1e-12);
    for (int trial = 0; trial < 5; ++trial) {
      const Field v = random_field(w1, rng);
      const Field u = project_PA(v, v0);
      CHECK(l2_norm(u) <= l2_norm(v) * (1.0 + 1e-13));
      for (int k = 0; k < v0->n_components(); ++k)
        CHECK(std::abs(integrate(u, k) - integrate(v, k)) <= 1e-12 * std::max(1.0, std::abs(integrate(v, k))));
    }
  }
}

TEST_CASE("bounded projection") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (const auto& q : supported_quadruples()) {
    const MeshPtr mm = mesh_for(q);
    const auto v0 = make_space(mm, q.v0);
    const auto w1 = make_space(mm, q.v1);
    if (!is_recovery_pair(broken_tag(q.v0), q.v0)) continue;
    Field c = random_field(v0, rng);
    CHECK(rel(project_PB(inject(c, w1), v0), c) <= 1e-14);
    for (int trial = 0; trial < 10; ++trial) {
      Field v(w1);
      for (int i = 0; i < w1->n_dofs(); ++i) v.coeffs[i] = U(rng);
      const Field u = project_PB(v, v0);
      CHECK(u.coeffs.minCoeff() >= 0.0);
      CHECK(u.coeffs.maxCoeff() <= 1.0);
    }
  }
}

TEST_CASE("bounded projection does not conserve mass of a spike") {
  double largest = 0.0;
  for (const auto& q : supported_quadruples()) {
    if (!is_recovery_pair(broken_tag(q.v0), q.v0)) continue;
    const MeshPtr m = mesh_for(q, 4);
    const auto v0 = make_space(m, q.v0);
    const auto v1 = make_space(m, q.v1);
    for (int d = 0; d < v1->n_dofs(); ++d) {
      Field spike(v1);
      spike.coeffs[d] = 1.0;
      const Field u = project_PB(spike, v0);
      for (int k = 0; k < v0->n_components(); ++k)
        largest = std::max(largest, std::abs(integrate(u, k) - integrate(spike, k)));
    }
  }
  CHECK(largest > 0.0);
}

TEST_CASE("scheme operators") {
  std::mt19937 rng(17);
  for (const auto& q : supported_quadruples()) {
    for (const Projection p : {Projection::A, Projection::B}) {
      const MeshPtr mm = mesh_for(q);
      const SchemeOperators ops(mm, q, p, true);
      Field one(ops.v0());
      one.coeffs.setConstant(2.0);
      const Field j1 = ops.apply_j(one);
      CHECK((j1.coeffs.array() - 2.0).abs().maxCoeff() < 1e-13);
      for (int trial = 0; trial < 50; ++trial) {
        const Field r = random_field(ops.v0(), rng);
        CHECK(rel(ops.project(ops.apply_j(r)), r) <= 1e-11);
      }
    }
  }
  CHECK_THROWS_AS(SchemeOperators(make_quad(3, 3, 1.0, 1.0, true),
                                  {SpaceTag::DG0xDG0, SpaceTag::DG1xDG1, SpaceTag::CG1xCG1, SpaceTag::DG0xDG1},
                                  Projection::A, true),
                  Error);
}

TEST_CASE("J is bounded by the recovery constant") {
  std::mt19937 rng(19);
  const MeshPtr m = make_quad(12, 12, 1.0, 1.0, true);
  const SchemeOperators ops(m, supported_quadruples()[2], Projection::A, true);
  double c_bound = 0.0;
  std::vector<Field> fields;
  for (int trial = 0; trial < 30; ++trial) {
    fields.push_back(random_field(ops.v0(), rng));
    c_bound = std::max(c_bound, l2_norm(ops.recover(fields.back())) / l2_norm(fields.back()));
  }
  for (const Field& r : fields) CHECK(l2_norm(ops.apply_j(r)) <= (1.0 + 2.0 * c_bound) * l2_norm(r));
}

TEST_CASE("recovery bound is mesh independent") {
  for (const bool boundary : {true, false}) {
    std::vector<double> bounds;
    for (const int n : {10, 20, 40}) {
      const SchemeOperators ops(make_quad(n, n, 1.0, 1.0, true), supported_quadruples()[2], Projection::A, boundary);
      Field e(ops.v0());
      const SpacePtr vt = ops.recover(e).space;
      Eigen::MatrixXd r(vt->n_dofs(), ops.v0()->n_dofs());
      for (int j = 0; j < ops.v0()->n_dofs(); ++j) {
        e.coeffs.setZero();
        e.coeffs[j] = 1.0;
        r.col(j) = ops.recover(e).coeffs;
      }
      const Eigen::MatrixXd m1 = Eigen::MatrixXd(mass_matrix(*vt));
      const Eigen::MatrixXd m0 = Eigen::MatrixXd(mass_matrix(*ops.v0()));
      const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(r.transpose() * m1 * r, m0);
      bounds.push_back(std::sqrt(es.eigenvalues().maxCoeff()));
    }
    CHECK(bounds.front() >= 1.0 - 1e-12);
    const auto [lo, hi] = std::minmax_element(bounds.begin(), bounds.end());
    CHECK(*hi / *lo < 1.01);
  }
}
