#include <doctest.h>

#include "chernoff/products.hpp"

using namespace chernoff;
using linalg::Complex;
using linalg::Matrix;
using linalg::Vector;
using products::Schedule;
using semigroup::OneParameterFamily;
using superop::ContractionMap;

TEST_CASE("n = 1 product is Pi(V_t)") {
  Matrix u = linalg::random_unitary(3, 1);
  Matrix x = linalg::random_contraction_generator(3, 2);
  auto pi = ContractionMap::unitary_conjugation(u);
  auto v = OneParameterFamily::exp_family(x);
  Matrix product = products::iterated_product(pi, v, 0.8, 1);
  CHECK((product - pi.apply(v.evaluate(0.8))).norm() <= 1e-13);
}

TEST_CASE("identity map recovers the semigroup itself") {
  Matrix x = linalg::random_contraction_generator(3, 3);
  auto pi = ContractionMap::identity(3);
  auto v = OneParameterFamily::exp_family(x);
  Matrix product = products::iterated_product(pi, v, 1.0, 128);
  CHECK(linalg::spectral_norm(Matrix(product - linalg::expm(x, 1.0))) <= 1e-9);
}

TEST_CASE("factor order is Pi(V) then Pi^2(V), left to right") {
  Matrix u = linalg::random_unitary(2, 4);
  Matrix x = linalg::random_contraction_generator(2, 5);
  auto pi = ContractionMap::unitary_conjugation(u);
  auto v = OneParameterFamily::exp_family(x);
  double t = 0.6;
  Matrix step = v.evaluate(t / 2.0);
  Matrix by_hand = pi.apply(step) * pi.iterate(step, 2);
  CHECK((products::iterated_product(pi, v, t, 2) - by_hand).norm() <= 1e-13);
}

TEST_CASE("example 2 product converges to the block-diagonal limit") {
  Matrix x1 = linalg::random_contraction_generator(2, 42);
  Matrix x2 = linalg::random_contraction_generator(2, 43);
  auto v = OneParameterFamily::block_mix(x1, x2);
  auto pi = ContractionMap::block_sign_flip(2);
  Matrix mean = 0.5 * (x1 + x2);
  Matrix a = Matrix::Zero(4, 4);
  a.topLeftCorner(2, 2) = mean;
  a.bottomRightCorner(2, 2) = mean;
  Matrix limit = linalg::expm(a, 1.0);
  double err16 = linalg::spectral_norm(
      Matrix(products::iterated_product(pi, v, 1.0, 16) - limit));
  double err1024 = linalg::spectral_norm(
      Matrix(products::iterated_product(pi, v, 1.0, 1024) - limit));
  CHECK(err1024 < err16);
  CHECK(err1024 <= 1e-2);
}

TEST_CASE("product norms stay below 1 + n eps under the hypotheses") {
  Matrix u = linalg::random_unitary(3, 6);
  Matrix x = linalg::random_contraction_generator(3, 7);
  auto pi = ContractionMap::unitary_conjugation(u);
  auto v = OneParameterFamily::exp_family(x);
  for (long n : {1L, 16L, 256L}) {
    Matrix product = products::iterated_product(pi, v, 1.0, n);
    CHECK(linalg::spectral_norm(product) <= 1.0 + n * 1e-12);
  }
}

TEST_CASE("schedule: uniform entry matches iterated_product") {
  Matrix u = linalg::random_unitary(2, 8);
  Matrix x = linalg::random_contraction_generator(2, 9);
  auto pi = ContractionMap::unitary_conjugation(u);
  auto v = OneParameterFamily::exp_family(x);
  auto schedule = Schedule::sequenced({{32, 1.0 / 32.0}}, 1.0);
  auto rows = products::schedule_product(pi, v, schedule);
  REQUIRE(rows.size() == 1);
  CHECK((rows[0].product - products::iterated_product(pi, v, 1.0, 32)).norm() <=
        1e-13);
}

TEST_CASE("schedule with k_n t_n -> t has decreasing errors") {
  // k_n = 2^n, t_n = t/2^n + t/4^n, so k_n t_n -> t from above.
  Matrix u = linalg::random_unitary(2, 10);
  Matrix x = linalg::random_contraction_generator(2, 11);
  auto pi = ContractionMap::unitary_conjugation(u);
  auto v = OneParameterFamily::exp_family(x);
  auto p = superop::exact_pinching_projector(u);
  Matrix limit = linalg::expm(p.apply(x), 1.0);
  std::vector<std::pair<long, double>> pairs;
  for (int k = 4; k <= 10; ++k) {
    double kn = std::pow(2.0, k);
    pairs.push_back({static_cast<long>(kn),
                     1.0 / kn + 1.0 / std::pow(4.0, k)});
  }
  auto rows = products::schedule_product(
      pi, v, Schedule::sequenced(pairs, 1.0));
  double first = linalg::spectral_norm(Matrix(rows.front().product - limit));
  double last = linalg::spectral_norm(Matrix(rows.back().product - limit));
  CHECK(last < first);
}

TEST_CASE("empty schedule yields empty output") {
  auto pi = ContractionMap::identity(2);
  auto v = OneParameterFamily::exp_family(linalg::random_contraction_generator(2, 12));
  auto rows = products::schedule_product(pi, v, Schedule::sequenced({}, 1.0));
  CHECK(rows.empty());
}

TEST_CASE("invalid schedules are rejected") {
  CHECK_THROWS_AS(Schedule::sequenced({{4, 0.3}, {2, 0.2}}, 1.0), Error);
  CHECK_THROWS_AS(Schedule::sequenced({{2, 0.1}, {4, 0.5}}, 1.0), Error);
  CHECK_THROWS_AS(Schedule::sequenced({{4, 1.0}}, 1.0), Error);  // k t off 10%
}

TEST_CASE("decoupling with the trivial pulse is e^{tx}") {
  Matrix x = linalg::random_contraction_generator(3, 13);
  Matrix product = products::decoupling_product(Matrix::Identity(3, 3), x, 1.0, 64);
  CHECK(linalg::spectral_norm(Matrix(product - linalg::expm(x, 1.0))) <= 1e-10);
}

TEST_CASE("decoupling at n = 1 is u e^{tx} u^dag") {
  Matrix u = linalg::random_unitary(3, 14);
  Matrix x = linalg::random_contraction_generator(3, 15);
  Matrix product = products::decoupling_product(u, x, 0.9, 1);
  CHECK((product - u * linalg::expm(x, 0.9) * u.adjoint()).norm() <= 1e-12);
}

TEST_CASE("decoupling converges to the pinched generator") {
  Matrix u = Matrix::Zero(2, 2);
  u(0, 0) = 1.0;
  u(1, 1) = -1.0;
  Matrix x = linalg::random_contraction_generator(2, 16);
  Matrix pinched = x;
  pinched(0, 1) = 0.0;
  pinched(1, 0) = 0.0;
  Matrix limit = linalg::expm(pinched, 1.0);
  double prev = std::numeric_limits<double>::infinity();
  for (long n : {64L, 512L, 4096L}) {
    double err = linalg::spectral_norm(
        Matrix(products::decoupling_product(u, x, 1.0, n) - limit));
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev <= 1e-2);
}

TEST_CASE("decoupling accepts complex time") {
  Matrix u = linalg::random_unitary(2, 17);
  Matrix x = linalg::random_contraction_generator(2, 18);
  Matrix product = products::decoupling_product(u, x, Complex(0.0, 1.0), 16);
  CHECK(product.allFinite());
}

TEST_CASE("cyclic with one trivial pulse is e^{tx}") {
  Matrix x = linalg::random_contraction_generator(3, 19);
  Matrix product =
      products::cyclic_product({Matrix::Identity(3, 3)}, x, 1.0, 32);
  CHECK(linalg::spectral_norm(Matrix(product - linalg::expm(x, 1.0))) <= 1e-10);
}

TEST_CASE("cyclic rejects n not divisible by k") {
  Matrix u = linalg::random_unitary(2, 20);
  Matrix x = linalg::random_contraction_generator(2, 21);
  CHECK_THROWS_AS(products::cyclic_product({u, u.adjoint()}, x, 1.0, 7), Error);
}

TEST_CASE("cyclic u2 = u1^dag agrees with the two-unitary machinery") {
  Matrix u1 = linalg::random_unitary(3, 22);
  Matrix x = linalg::random_contraction_generator(3, 23);
  long n = 64;
  Matrix cyc = products::cyclic_product({u1, u1.adjoint()}, x, 1.0, n);
  auto two = products::two_unitary_product(u1, u1.adjoint(), x, 1.0, n);
  // u = u1 u2 = 1, so raw = corrected = the cyclic product.
  CHECK((cyc - two.corrected).norm() <= 1e-12);
}

TEST_CASE("decoupling equals cyclic built from repeated pulses") {
  // With u^4 = 1 and 4 | n, (u e^{(t/n)x})^n (u^dag)^n and the 4-pulse
  // cyclic product agree exactly since (u^dag)^n = 1.
  Matrix u = Matrix::Zero(2, 2);
  u(0, 0) = Complex(0, 1);
  u(1, 1) = Complex(0, -1);  // u^4 = 1
  Matrix x = linalg::random_contraction_generator(2, 24);
  long n = 32;
  Matrix dec = products::decoupling_product(u, x, 1.0, n);
  Matrix cyc = products::cyclic_product({u, u, u, u}, x, 1.0, n);
  CHECK((dec - cyc).norm() <= 1e-10);
}

TEST_CASE("two-unitary product with trivial pulses is e^{tx}") {
  Matrix x = linalg::random_contraction_generator(3, 25);
  Matrix id = Matrix::Identity(3, 3);
  auto result = products::two_unitary_product(id, id, x, 1.0, 64);
  CHECK(linalg::spectral_norm(Matrix(result.corrected - linalg::expm(x, 1.0))) <=
        1e-10);
}

TEST_CASE("two-unitary with u2 = u1^dag has generator (u1 x u1^dag + x)/2") {
  Matrix u1 = linalg::random_unitary(3, 26);
  Matrix x = linalg::random_contraction_generator(3, 27);
  Matrix a = 0.5 * (u1 * x * u1.adjoint() + x);
  Matrix limit = linalg::expm(a, 1.0);
  auto coarse = products::two_unitary_product(u1, u1.adjoint(), x, 1.0, 64);
  auto fine = products::two_unitary_product(u1, u1.adjoint(), x, 1.0, 4096);
  CHECK((coarse.raw - coarse.corrected).norm() <= 1e-12);  // u = 1
  double err_coarse = linalg::spectral_norm(Matrix(coarse.corrected - limit));
  double err_fine = linalg::spectral_norm(Matrix(fine.corrected - limit));
  CHECK(err_fine < err_coarse);
  CHECK(err_fine <= 1e-2);
}

TEST_CASE("two-unitary product rejects odd n") {
  Matrix u = linalg::random_unitary(2, 28);
  Matrix x = linalg::random_contraction_generator(2, 29);
  CHECK_THROWS_AS(products::two_unitary_product(u, u, x, 1.0, 7), Error);
}

TEST_CASE("zeno with the full projector is e^{tx}") {
  Matrix x = linalg::random_contraction_generator(3, 30);
  Matrix product = products::zeno_product(Matrix::Identity(3, 3), x, 1.0, 64);
  CHECK(linalg::spectral_norm(Matrix(product - linalg::expm(x, 1.0))) <= 1e-10);
}

TEST_CASE("rank-1 zeno limit is the scalar compression") {
  Matrix q = linalg::random_unitary(3, 31);
  Vector v = q.col(0);
  Matrix p = v * v.adjoint();
  Matrix x = linalg::random_contraction_generator(3, 32);
  Complex compressed = (v.adjoint() * x * v)(0, 0);
  Matrix limit = std::exp(compressed) * p;
  Matrix product = products::zeno_product(p, x, 1.0, 4096);
  CHECK(linalg::spectral_norm(Matrix(product - limit)) <= 1e-3);
}

TEST_CASE("rank-2 zeno error decreases toward exp(p x p) p") {
  Matrix q = linalg::random_unitary(4, 33);
  Matrix p = q.col(0) * q.col(0).adjoint() + q.col(1) * q.col(1).adjoint();
  Matrix x = linalg::random_contraction_generator(4, 34);
  Matrix limit = linalg::expm(p * x * p, 1.0) * p;
  double prev = std::numeric_limits<double>::infinity();
  for (long n : {16L, 256L, 4096L}) {
    double err = linalg::spectral_norm(
        Matrix(products::zeno_product(p, x, 1.0, n) - limit));
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("zeno rejects a non-projector") {
  Matrix not_p = 0.5 * Matrix::Ones(2, 2);
  not_p(0, 1) = 0.7;
  Matrix x = linalg::random_contraction_generator(2, 35);
  CHECK_THROWS_AS(products::zeno_product(not_p, x, 1.0, 4), Error);
}

TEST_CASE("sqrt(n) bound: identity contraction gives 0 on both sides") {
  Vector v = linalg::random_unit_vector(3, 36);
  auto pair = products::chernoff_bound_check(Matrix::Identity(3, 3), v, 10);
  CHECK(pair.lhs <= 1e-12);
  CHECK(pair.rhs <= 1e-12);
}

TEST_CASE("sqrt(n) bound: n = 0 gives lhs = 0") {
  Matrix s = linalg::random_contraction(3, 37);
  Vector v = linalg::random_unit_vector(3, 38);
  auto pair = products::chernoff_bound_check(s, v, 0);
  CHECK(pair.lhs <= 1e-12);
}

TEST_CASE("sqrt(n) bound holds on a random sweep") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    int d = 2 + static_cast<int>(seed % 5);
    Matrix s = linalg::random_contraction(d, 1000 + seed);
    Vector v = linalg::random_unit_vector(d, 2000 + seed);
    long n = 1 + static_cast<long>(seed % 64);
    auto pair = products::chernoff_bound_check(s, v, n);
    CHECK(pair.lhs <= pair.rhs + 1e-9);
  }
}

TEST_CASE("sqrt(n) bound rejects an expanding operator") {
  Vector v = linalg::random_unit_vector(2, 39);
  CHECK_THROWS_AS(
      products::chernoff_bound_check(2.0 * Matrix::Identity(2, 2), v, 4), Error);
}

TEST_CASE("O(1/n) bound: fixed point gives lhs ~ 0 and bound 0") {
  auto pi = ContractionMap::block_sign_flip(2);
  Matrix w = linalg::random_contraction(2, 40);
  Matrix x = Matrix::Zero(4, 4);
  x.topLeftCorner(2, 2) = w - Matrix::Identity(2, 2);
  // Block-diagonal with contraction shifts: fixed by the map, admissible.
  auto result = products::product_bound_check(pi, x, 1.0, 8);
  CHECK(result.y_norm <= 1e-9);
  CHECK(result.lhs <= 1e-9);
}

TEST_CASE("O(1/n) bound holds under the block sign flip") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto pi = ContractionMap::block_sign_flip(2);
    Matrix w = linalg::random_contraction(4, 3000 + seed);
    Matrix x = w - Matrix::Identity(4, 4);
    for (long n : {4L, 16L, 64L}) {
      auto result = products::product_bound_check(pi, x, 1.0, n);
      CHECK(result.lhs <= result.bound + 10.0 * result.decomposition_residual);
    }
  }
}

TEST_CASE("O(1/n) bound: n * lhs stays bounded along a dyadic sweep") {
  auto pi = ContractionMap::unitary_conjugation(linalg::random_unitary(3, 41));
  Matrix w = linalg::random_contraction(3, 42);
  Matrix x = w - Matrix::Identity(3, 3);
  double worst = 0.0;
  double cap = 0.0;
  for (int k = 2; k <= 12; ++k) {
    long n = 1L << k;
    auto result = products::product_bound_check(pi, x, 1.0, n);
    worst = std::max(worst, static_cast<double>(n) * result.lhs);
    // n * bound is a constant in n; add the residual slack.
    cap = std::max(cap, static_cast<double>(n) *
                            (result.bound +
                             10.0 * result.decomposition_residual));
  }
  CHECK(worst <= cap + 1e-9);
}

TEST_CASE("O(1/n) bound rejects an inadmissible operand") {
  auto pi = ContractionMap::block_sign_flip(1);
  Matrix x = Matrix::Identity(2, 2);  // ||1 + (t/n) x|| > 1
  CHECK_THROWS_AS(products::product_bound_check(pi, x, 1.0, 4), Error);
}

TEST_CASE("O(1/n) bound requires a unital map") {
  Matrix q = linalg::random_unitary(2, 43);
  Matrix p = q.col(0) * q.col(0).adjoint();
  auto pi = ContractionMap::projection_compression(p);
  Matrix w = linalg::random_contraction(2, 44);
  Matrix x = w - Matrix::Identity(2, 2);
  CHECK_THROWS_AS(products::product_bound_check(pi, x, 1.0, 4), Error);
}

TEST_CASE("telescoping bound: equal operands give 0") {
  auto pi = ContractionMap::block_sign_flip(2);
  Matrix w = linalg::random_contraction(4, 45);
  Matrix x = w - Matrix::Identity(4, 4);
  auto pair = products::telescoping_diff_check(pi, x, x, 1.0, 16);
  CHECK(pair.lhs == 0.0);
}

TEST_CASE("telescoping bound scales with a small perturbation") {
  auto pi = ContractionMap::unitary_conjugation(linalg::random_unitary(3, 46));
  Matrix w1 = linalg::random_contraction(3, 47);
  Matrix w2 = linalg::random_contraction(3, 48);
  Matrix x1 = w1 - Matrix::Identity(3, 3);
  double eps = 1e-3;
  Matrix x2 = (1.0 - eps) * w1 + eps * w2 - Matrix::Identity(3, 3);
  auto pair = products::telescoping_diff_check(pi, x1, x2, 1.0, 32);
  CHECK(pair.lhs <= pair.rhs + 1e-9);
  CHECK(pair.rhs <= eps * (linalg::spectral_norm(Matrix(w1 - w2))) + 1e-12);
}

TEST_CASE("telescoping bound holds on random admissible pairs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto pi = ContractionMap::unitary_conjugation(
        linalg::random_unitary(3, 4000 + seed));
    Matrix w1 = linalg::random_contraction(3, 5000 + seed);
    Matrix w2 = linalg::random_contraction(3, 6000 + seed);
    Matrix x1 = w1 - Matrix::Identity(3, 3);
    Matrix x2 = w2 - Matrix::Identity(3, 3);
    auto pair = products::telescoping_diff_check(pi, x1, x2, 1.0, 16);
    CHECK(pair.lhs <= pair.rhs + 1e-9);
  }
}
