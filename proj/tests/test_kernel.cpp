#include "uhop/kernel.hpp"

#include "uhop/io.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <Eigen/SVD>

#include <cmath>
#include <cstdio>

using namespace uhop;

TEST_CASE("feature map init is deterministic and full rank") {
  const FeatureMap a = init_feature_map(4, 16, 77);
  const FeatureMap b = init_feature_map(4, 16, 77);
  CHECK((a.W - b.W).cwiseAbs().maxCoeff() == 0.0);

  Eigen::JacobiSVD<Matrix> svd(a.W);
  CHECK(svd.singularValues().size() == 4);
  CHECK(svd.singularValues().minCoeff() > 1e-8);

  CHECK_THROWS_AS(init_feature_map(4, 2, 77), Error);
}

TEST_CASE("phi and kernel reduce to plain inner products under identity") {
  const FeatureMap id = identity_extended(3, 3);
  Vector u(3), v(3);
  u << 1.0, -2.0, 0.5;
  v << 0.0, 1.0, 4.0;
  CHECK((phi(id, u) - u).cwiseAbs().maxCoeff() == 0.0);
  CHECK(kernel_eval(id, u, v) == doctest::Approx(u.dot(v)));
  CHECK(phi(id, Vector::Zero(3)).cwiseAbs().maxCoeff() == 0.0);

  const FeatureMap twice(Matrix(2.0 * Matrix::Identity(2, 2)));
  Vector ones = Vector::Ones(2);
  CHECK((phi(twice, ones) - 2.0 * ones).cwiseAbs().maxCoeff() == 0.0);

  Vector e1 = Vector::Unit(3, 0), e2 = Vector::Unit(3, 1);
  CHECK(kernel_eval(id, e1, e2) == doctest::Approx(0.0));

  CHECK_THROWS_AS(phi(id, Vector::Zero(4)), Error);
}

TEST_CASE("kernel is symmetric and overlap matches columnwise evaluation") {
  Rng rng(21);
  const FeatureMap fm = init_feature_map(5, 10, 3);
  const PatternSet ps(testutil::random_matrix(5, 6, rng));
  const Vector x = testutil::random_vector(5, rng);

  for (int n = 0; n < 20; ++n) {
    const Vector u = testutil::random_vector(5, rng);
    const Vector v = testutil::random_vector(5, rng);
    CHECK(kernel_eval(fm, u, v) == doctest::Approx(kernel_eval(fm, v, u)).epsilon(1e-12));
  }

  const Vector overlap = kernel_overlap(fm, ps, x);
  REQUIRE(overlap.size() == 6);
  for (Index mu = 0; mu < 6; ++mu)
    CHECK(overlap[mu] == doctest::Approx(kernel_eval(fm, ps.data.col(mu), x)).epsilon(1e-12));

  const FeatureMap id = identity_extended(5, 5);
  CHECK((kernel_overlap(id, ps, x) - ps.data.transpose() * x).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(kernel_overlap(fm, ps, Vector::Zero(5)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ell_phi is the scaled negative squared feature distance") {
  Rng rng(31);
  const FeatureMap fm = init_feature_map(4, 8, 9);
  const Vector u = testutil::random_vector(4, rng);
  const Vector v = testutil::random_vector(4, rng);

  CHECK(ell_phi(fm, 2.0, u, u) == doctest::Approx(0.0));
  CHECK(ell_phi(fm, 1.0, u, v) <= 0.0);
  CHECK(ell_phi(fm, 2.0, u, v) == doctest::Approx(2.0 * ell_phi(fm, 1.0, u, v)).epsilon(1e-12));

  const double dist2 = (fm.W * (u - v)).squaredNorm();
  CHECK(ell_phi(fm, 2.0, u, v) == doctest::Approx(-2.0 * dist2).epsilon(1e-12));
}

TEST_CASE("row normalization") {
  Matrix w(3, 2);
  w.row(0) << 3.0, 4.0;
  w.row(1) << 0.0, 0.0;
  w.row(2) << 1.0, 0.0;
  const FeatureMap norm = normalize_rows(FeatureMap(w));
  CHECK(norm.W(0, 0) == doctest::Approx(0.6));
  CHECK(norm.W(0, 1) == doctest::Approx(0.8));
  CHECK(norm.W.row(1).cwiseAbs().maxCoeff() == 0.0);

  const FeatureMap again = normalize_rows(norm);
  CHECK((again.W - norm.W).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("row normalization can preserve the memory magnitude") {
  Rng rng(35);
  const PatternSet ps(testutil::random_matrix(4, 5, rng, 2.0));
  const FeatureMap fm = init_feature_map(4, 8, 12);
  const FeatureMap scaled = normalize_rows(fm, ps, RowScaling::preserve_memory_norm);
  const double mapped = (scaled.W * ps.data).colwise().norm().maxCoeff();
  const double raw = ps.data.colwise().norm().maxCoeff();
  CHECK(mapped == doctest::Approx(raw).epsilon(1e-12));
  // rows all share one scale factor
  const FeatureMap unit = normalize_rows(fm);
  const double factor = scaled.W(0, 0) / unit.W(0, 0);
  CHECK((scaled.W - factor * unit.W).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("operator norm by power iteration") {
  CHECK(lipschitz_of_phi(identity_extended(4, 4)) == doctest::Approx(1.0));
  CHECK(lipschitz_of_phi(FeatureMap(Matrix(-2.5 * Matrix::Identity(3, 3)))) ==
        doctest::Approx(2.5));

  Rng rng(37);
  for (int n = 0; n < 30; ++n) {
    const Matrix w = testutil::random_matrix(8, 4, rng);
    Eigen::JacobiSVD<Matrix> svd(w);
    CHECK(lipschitz_of_phi(FeatureMap(w)) ==
          doctest::Approx(svd.singularValues().maxCoeff()).epsilon(1e-6));
  }
}

TEST_CASE("feature distances respect the Lipschitz constant") {
  Rng rng(39);
  const FeatureMap fm = init_feature_map(6, 12, 20);
  const double lip = lipschitz_of_phi(fm);
  for (int n = 0; n < 1000; ++n) {
    const Vector u = testutil::random_vector(6, rng);
    const Vector v = testutil::random_vector(6, rng);
    CHECK((fm.W * (u - v)).norm() <= lip * (u - v).norm() + 1e-9);
  }
}

TEST_CASE("normalized feature identity for the log similarity") {
  // With unit feature vectors, -t|a-b|^2 = 2t<a,b> - 2t.
  Rng rng(43);
  for (int n = 0; n < 100; ++n) {
    Vector a = testutil::random_vector(5, rng);
    Vector b = testutil::random_vector(5, rng);
    a.normalize();
    b.normalize();
    const double t = 0.5 + 2.0 * rng.next_uniform();
    const double lhs = -t * (a - b).squaredNorm();
    const double rhs = 2.0 * t * a.dot(b) - 2.0 * t;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("kernel gram matrices are positive semidefinite") {
  Rng rng(47);
  for (int n = 0; n < 50; ++n) {
    const Index d = 2 + static_cast<Index>(rng.next_below(5));
    const FeatureMap fm = init_feature_map(d, 2 * d, rng.next_u64());
    const PatternSet ps(testutil::random_matrix(d, 4, rng));
    const Matrix mapped = fm.W * ps.data;
    const Matrix gram = mapped.transpose() * mapped;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("feature map csv round trip") {
  const FeatureMap fm = init_feature_map(3, 7, 55);
  const std::string path = "uhop_test_fm.csv";
  save_feature_map_csv(fm, path);
  const FeatureMap back = load_feature_map_csv(path);
  REQUIRE(back.feature_dim() == 7);
  REQUIRE(back.input_dim() == 3);
  CHECK((back.W - fm.W).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}
