#include <doctest.h>

#include <cmath>
#include <set>

#include "fgw/linear_ot.hpp"
#include "fgw/solver.hpp"
#include "fgw/toolkit.hpp"
#include "oracles.hpp"

using namespace fgw;

TEST_CASE("shortest path structures") {
  SUBCASE("path graph P3") {
    GraphSpec g{3, {{0, 1, 1.0}, {1, 2, 1.0}}, Matrix::Zero(3, 1), Histogram::uniform(3)};
    Matrix expected(3, 3);
    expected << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    CHECK((shortest_path_structure(g).structure() - expected).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("the isometric pair reproduces the printed matrices") {
    auto [x, y] = make_isometric_graphs();
    Matrix dx(4, 4), dy(4, 4);
    dx << 0, 1, 1, 1, 1, 0, 1, 2, 1, 1, 0, 2, 1, 2, 2, 0;
    dy << 0, 1, 1, 1, 1, 0, 2, 2, 1, 2, 0, 1, 1, 2, 1, 0;
    CHECK((x.structure() - dx).cwiseAbs().maxCoeff() == 0.0);
    CHECK((y.structure() - dy).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("single weighted edge") {
    GraphSpec g{2, {{0, 1, 2.5}}, Matrix::Zero(2, 1), Histogram::uniform(2)};
    Matrix c = shortest_path_structure(g).structure();
    CHECK(c(0, 1) == 2.5);
    CHECK(c(1, 0) == 2.5);
  }
  SUBCASE("disconnected graphs are reported with their components") {
    GraphSpec g{4, {{0, 1, 1.0}, {2, 3, 1.0}}, Matrix::Zero(4, 1), Histogram::uniform(4)};
    CHECK_THROWS_AS(shortest_path_structure(g), DisconnectedGraph);
  }
  SUBCASE("graph metrics satisfy the triangle inequality exactly") {
    auto graphs = make_noisy_loop_graphs(LoopClass::Circle, 2, 9);
    for (const auto& g : graphs) {
      auto obj = shortest_path_structure(g);
      for (const auto& v : validate(obj)) CHECK(v.code != ViolationCode::TriangleInequality);
    }
  }
}

TEST_CASE("toy trees fixture") {
  auto [t1, t2] = make_toy_trees();
  CHECK(t1.size() == 15);
  CHECK((t1.structure() - t2.structure()).cwiseAbs().maxCoeff() == 0.0);
  // equal color multisets
  CHECK(t1.features().sum() == t2.features().sum());
  CHECK(t1.features().cwiseAbs().sum() == t2.features().cwiseAbs().sum());
  // different placement
  CHECK((t1.features() - t2.features()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("shifted image pair") {
  SUBCASE("zero shift gives equal objects and zero fgw") {
    auto [a, b] = make_shifted_image_pair(8, 0);
    CHECK((a.features() - b.features()).cwiseAbs().maxCoeff() == 0.0);
    SolverParams params;
    params.alpha = 0.1;
    params.q = 2;
    params.restarts = 0;
    CHECK(solve_fgw(a, b, params).value <= 1e-12);
  }
  SUBCASE("structures are identical grids; feature multisets match") {
    auto [a, b] = make_shifted_image_pair(8, 3);
    CHECK((a.structure() - b.structure()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.features().sum() == b.features().sum());
    CHECK(wasserstein_distance(a, b, 1) <= 1e-12);
  }
  SUBCASE("off-grid shifts are rejected") {
    CHECK_THROWS_AS(make_shifted_image_pair(8, 7), InvalidObject);
  }
}

TEST_CASE("noisy loop graphs") {
  SUBCASE("determinism and node count range") {
    auto a = make_noisy_loop_graphs(LoopClass::Circle, 3, 42);
    auto b = make_noisy_loop_graphs(LoopClass::Circle, 3, 42);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].n == b[i].n);
      CHECK((a[i].features - b[i].features).cwiseAbs().maxCoeff() == 0.0);
      CHECK(a[i].n >= 10);
      CHECK(a[i].n <= 25);
      CHECK(a[i].edges == b[i].edges);
    }
  }
  SUBCASE("eight-class features flip sign at the shared node") {
    auto graphs = make_noisy_loop_graphs(LoopClass::Eight, 4, 57);
    for (const auto& g : graphs) {
      // node 0 is the junction; its loop-A neighbors sit well below zero,
      // loop-B neighbors well above
      double lo = 1e9, hi = -1e9;
      for (const auto& [i, j, w] : g.edges) {
        if (i == 0) {
          lo = std::min(lo, g.features(j, 0));
          hi = std::max(hi, g.features(j, 0));
        }
        if (j == 0) {
          lo = std::min(lo, g.features(i, 0));
          hi = std::max(hi, g.features(i, 0));
        }
      }
      CHECK(lo < 0.0);
      CHECK(hi > 0.0);
    }
  }
}

TEST_CASE("stochastic block model") {
  SUBCASE("determinism") {
    auto a = make_sbm({5, 5}, 0.9, 0.1, {{0.0}, {1.0}}, 3);
    auto b = make_sbm({5, 5}, 0.9, 0.1, {{0.0}, {1.0}}, 3);
    CHECK(a.edges == b.edges);
    CHECK((a.features - b.features).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("p_out = 0 cannot connect two blocks") {
    CHECK_THROWS_AS(make_sbm({4, 4}, 1.0, 0.0, {{0.0}, {1.0}}, 5), DisconnectedGraph);
  }
  SUBCASE("four blocks stay denser inside than across") {
    auto g = make_sbm({8, 8, 8, 8}, 0.8, 0.05, {{-1.0}, {-0.3}, {0.3}, {1.0}}, 11);
    auto block_of = [](Index node) { return node / 8; };
    int inside = 0, across = 0;
    for (const auto& [i, j, w] : g.edges) {
      (block_of(i) == block_of(j) ? inside : across)++;
    }
    CHECK(inside > across);
    CHECK_NOTHROW(shortest_path_structure(g));
  }
}

TEST_CASE("two-hump series") {
  SUBCASE("determinism") {
    auto a = make_two_hump_series(6, 0.15, 77);
    auto b = make_two_hump_series(6, 0.15, 77);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK((a[i].features() - b[i].features()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("within-class distances undercut between-class on average") {
    auto series = make_two_hump_series(10, 0.3, 31);
    SolverParams params;
    params.alpha = 0.5;
    params.p = 1;
    params.q = 1;
    params.restarts = 2;
    double within = 0.0, between = 0.0;
    int wc = 0, bc = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
      for (std::size_t j = i + 1; j < series.size(); ++j) {
        const double d = solve_fgw(series[i], series[j], params).value;
        if (i % 2 == j % 2) {
          within += d;
          ++wc;
        } else {
          between += d;
          ++bc;
        }
      }
    }
    CHECK(within / wc < between / bc);
  }
  SUBCASE("a time-reversed signal keeps the value multiset, so W vanishes") {
    auto series = make_two_hump_series(2, 0.2, 99);
    const auto& s = series[0];
    std::vector<Index> reversed(s.size());
    for (Index i = 0; i < s.size(); ++i) reversed[i] = s.size() - 1 - i;
    CHECK(wasserstein_distance(s, s.permuted(reversed), 1) <= 1e-12);
  }
}

TEST_CASE("classical mds") {
  SUBCASE("three collinear points embed exactly in 1d") {
    Matrix d(3, 3);
    d << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    Matrix pts = mds_embed(d, 1);
    for (Index i = 0; i < 3; ++i) {
      for (Index j = 0; j < 3; ++j) {
        CHECK(std::abs((pts.row(i) - pts.row(j)).norm() - d(i, j)) <= 1e-9);
      }
    }
    // sign fix: first nonzero coordinate positive
    CHECK(pts(0, 0) > 0.0);
  }
  SUBCASE("zero distances collapse to the origin") {
    Matrix pts = mds_embed(Matrix::Zero(4, 4), 2);
    CHECK(pts.cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("unit square is reproduced up to rigid motion") {
    Matrix d(4, 4);
    const double s2 = std::sqrt(2.0);
    d << 0, 1, s2, 1, 1, 0, 1, s2, s2, 1, 0, 1, 1, s2, 1, 0;
    Matrix pts = mds_embed(d, 2);
    for (Index i = 0; i < 4; ++i) {
      for (Index j = 0; j < 4; ++j) {
        CHECK(std::abs((pts.row(i) - pts.row(j)).norm() - d(i, j)) <= 1e-9);
      }
    }
  }
  SUBCASE("asymmetric input is rejected") {
    Matrix d = Matrix::Zero(3, 3);
    d(0, 1) = 1.0;
    CHECK_THROWS_AS(mds_embed(d, 1), NonSymmetricInput);
  }
}

TEST_CASE("silhouette and adjusted rand index") {
  Matrix pts(4, 1);
  pts << 0.0, 0.1, 10.0, 10.1;
  CHECK(silhouette_score(pts, {0, 0, 1, 1}) > 0.9);
  CHECK(silhouette_score(pts, {0, 1, 0, 1}) < 0.0);

  CHECK(adjusted_rand_index({0, 0, 1, 1}, {1, 1, 0, 0}) == doctest::Approx(1.0));
  CHECK(adjusted_rand_index({0, 0, 1, 1}, {0, 1, 0, 1}) < 0.5);
}

TEST_CASE("equivalent objects: product-metric GW vanishes, FGW does not") {
  auto [x, y] = make_equivalent_objects();
  auto fused_x = fuse_features_into_structure(x);
  auto fused_y = fuse_features_into_structure(y);

  // manual spot check of the fused structure
  CHECK(fused_x.structure()(0, 1) ==
        doctest::Approx(x.structure()(0, 1) +
                        (x.features().row(0) - x.features().row(1)).norm()));

  SolverParams params;
  params.alpha = 1.0;
  params.p = 1;
  params.q = 1;
  params.restarts = 40;
  CHECK(solve_fgw(fused_x, fused_y, params).value <= 1e-8);

  params.alpha = 0.5;
  CHECK(solve_fgw(x, y, params).value > 1e-3);
}

TEST_CASE("concentration experiment decays") {
  ConcentrationTarget target;
  target.reference_size = 64;
  ConcentrationResult res = concentration_experiment(target, {8, 16, 32}, 3, 123);
  REQUIRE(res.mean_distance.size() == 3);
  for (double v : res.mean_distance) CHECK(v > 0.0);
  CHECK(res.slope < 0.0);
}
