#include <doctest.h>

#include <cmath>
#include <random>

#include "crfner/error.hpp"
#include "crfner/inference.hpp"
#include "oracle.hpp"

using namespace crfner;

namespace {

Lattice uniform(std::size_t T, std::size_t L, double v = 0.0) {
  Lattice lat;
  lat.node = Matrix(T, L, v);
  lat.transition = Matrix(L, L, v);
  lat.start.assign(L, v);
  return lat;
}

Model tiny_model(std::size_t labels, std::vector<std::string> features) {
  Model m;
  for (std::size_t i = 0; i < labels; ++i) m.labels.push_back("L" + std::to_string(i));
  for (const auto& f : features) m.features.intern(f);
  m.reset_weights();
  return m;
}

}  // namespace

TEST_CASE("build_lattice") {
  Model m = tiny_model(2, {"f"});
  const std::vector<FeatureVector> one{{{"f", 1.0}}};
  SUBCASE("zero weights give zero scores") {
    const auto lat = build_lattice(m, std::span<const FeatureVector>(one));
    CHECK(lat.node(0, 0) == 0.0);
    CHECK(lat.node(0, 1) == 0.0);
  }
  SUBCASE("weight times value") {
    m.unigram(0, 0) = 2.0;
    CHECK(build_lattice(m, std::span<const FeatureVector>(one)).node(0, 0) == 2.0);
    const std::vector<FeatureVector> half{{{"f", 0.5}}};
    CHECK(build_lattice(m, std::span<const FeatureVector>(half)).node(0, 0) == 1.0);
  }
  SUBCASE("unknown features contribute nothing") {
    m.unigram(0, 1) = 3.0;
    const std::vector<FeatureVector> v{{{"f", 1.0}, {"never-seen", 1.0}}};
    CHECK(build_lattice(m, std::span<const FeatureVector>(v)).node(0, 1) == 3.0);
  }
  SUBCASE("transitions and start row are copied") {
    m.transition(0, 1) = 0.25;
    m.transition(m.start_row(), 1) = -1.5;
    const auto lat = build_lattice(m, std::span<const FeatureVector>(one));
    CHECK(lat.transition(0, 1) == 0.25);
    CHECK(lat.start[1] == -1.5);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(build_lattice(m, std::span<const FeatureVector>()), UsageError);
  }
}

TEST_CASE("log_partition") {
  CHECK(log_partition(uniform(1, 2)) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(log_partition(uniform(2, 2)) == doctest::Approx(std::log(4.0)).epsilon(1e-12));

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto lat = oracle::random_lattice(rng, 1 + rng() % 6, 1 + rng() % 4);
    CHECK(std::abs(log_partition(lat) - oracle::log_partition(lat)) <= 1e-8);
  }
}

TEST_CASE("log_partition stays finite for large scores") {
  std::mt19937_64 rng(2);
  const auto lat = oracle::random_lattice(rng, 40, 4, -700.0, 700.0);
  const double z = log_partition(lat);
  CHECK(std::isfinite(z));
  const auto m = marginals(lat);
  for (std::size_t t = 0; t < lat.length(); ++t) {
    double sum = 0.0;
    for (std::size_t y = 0; y < 4; ++y) sum += m.node(t, y);
    CHECK(std::abs(sum - 1.0) <= 1e-10);
  }
  // A long sentence that would underflow in probability space.
  const auto long_lat = oracle::random_lattice(rng, 400, 5);
  CHECK(std::isfinite(log_partition(long_lat)));
}

TEST_CASE("log_partition bounds every path score") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto lat = oracle::random_lattice(rng, 1 + rng() % 5, 1 + rng() % 3);
    const double z = log_partition(lat);
    const auto all = oracle::enumerate(lat);
    for (std::size_t i = 0; i < all.paths.size(); ++i) {
      CHECK(path_score(lat, all.paths[i]) <= z + 1e-12);
      if (all.paths.size() > 1) CHECK(path_score(lat, all.paths[i]) < z);
    }
  }
  // One label: a single sequence, equality.
  const auto single = oracle::random_lattice(rng, 4, 1);
  const std::vector<std::size_t> zeros(4, 0);
  CHECK(log_partition(single) == doctest::Approx(path_score(single, zeros)).epsilon(1e-14));
}

TEST_CASE("per-position shift") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t T = 1 + rng() % 6, L = 1 + rng() % 4;
    const auto lat = oracle::random_lattice(rng, T, L);
    Lattice shifted = lat;
    const double c = std::uniform_real_distribution<double>(-5, 5)(rng);
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t y = 0; y < L; ++y) shifted.node(t, y) += c;
    CHECK(log_partition(shifted) == doctest::Approx(log_partition(lat) + T * c).epsilon(1e-12));
    CHECK(viterbi(shifted).path == viterbi(lat).path);
    const auto a = marginals(lat), b = marginals(shifted);
    for (std::size_t k = 0; k < a.node.data().size(); ++k) CHECK(std::abs(a.node.data()[k] - b.node.data()[k]) < 1e-12);
  }
}

TEST_CASE("marginals") {
  SUBCASE("uniform lattice") {
    const auto m = marginals(uniform(3, 2));
    for (double p : m.node.data()) CHECK(p == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("single label") {
    const auto m = marginals(uniform(4, 1, 0.3));
    for (double p : m.node.data()) CHECK(p == doctest::Approx(1.0).epsilon(1e-14));
    for (const auto& e : m.edge) CHECK(e(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("brute-force posteriors") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t T = 1 + rng() % 6, L = 1 + rng() % 4;
      const auto lat = oracle::random_lattice(rng, T, L);
      const auto m = marginals(lat);
      const auto p = oracle::posteriors(lat);
      REQUIRE(m.edge.size() == T - 1);
      for (std::size_t t = 0; t < T; ++t) {
        double row = 0.0;
        for (std::size_t y = 0; y < L; ++y) {
          CHECK(std::abs(m.node(t, y) - p.node[t][y]) <= 1e-8);
          row += m.node(t, y);
        }
        CHECK(std::abs(row - 1.0) <= 1e-10);
      }
      for (std::size_t t = 0; t + 1 < T; ++t) {
        double total = 0.0;
        for (std::size_t a = 0; a < L; ++a) {
          double out_sum = 0.0, in_sum = 0.0;
          for (std::size_t b = 0; b < L; ++b) {
            CHECK(std::abs(m.edge[t](a, b) - p.edge[t][a][b]) <= 1e-8);
            total += m.edge[t](a, b);
            out_sum += m.edge[t](a, b);
            in_sum += m.edge[t](b, a);
          }
          CHECK(std::abs(out_sum - m.node(t, a)) <= 1e-10);
          CHECK(std::abs(in_sum - m.node(t + 1, a)) <= 1e-10);
        }
        CHECK(std::abs(total - 1.0) <= 1e-10);
      }
    }
  }
}

TEST_CASE("viterbi") {
  SUBCASE("single position") {
    Lattice lat = uniform(1, 2);
    lat.node(0, 0) = 0.1;
    lat.node(0, 1) = 0.9;
    const auto v = viterbi(lat);
    CHECK(v.path == std::vector<std::size_t>{1});
    CHECK(v.score == doctest::Approx(0.9));
  }
  SUBCASE("all equal picks label 0") {
    CHECK(viterbi(uniform(5, 3, 0.7)).path == std::vector<std::size_t>(5, 0));
  }
  SUBCASE("exhaustive argmax on random lattices") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
      const auto lat = oracle::random_lattice(rng, 1 + rng() % 6, 1 + rng() % 4);
      const auto v = viterbi(lat);
      CHECK(v.path == oracle::argmax(lat));
      CHECK(v.score == path_score(lat, v.path));
    }
  }
  SUBCASE("tie rule on integer lattices") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 300; ++trial) {
      const auto lat = oracle::integer_lattice(rng, 1 + rng() % 6, 1 + rng() % 4);
      CHECK(viterbi(lat).path == oracle::argmax(lat));
    }
  }
  SUBCASE("model decode maps to label strings") {
    Model m = tiny_model(2, {"x"});
    m.unigram(0, 1) = 1.0;
    const std::vector<FeatureVector> v{{{"x", 1.0}}, {}};
    const auto d = viterbi(m, std::span<const FeatureVector>(v));
    CHECK(d.labels == std::vector<std::string>{"L1", "L0"});
    CHECK(d.score == 1.0);
    CHECK_THROWS_AS(viterbi(m, std::span<const FeatureVector>()), UsageError);
  }
}

TEST_CASE("nll_and_gradient") {
  SUBCASE("zero weights, empty features") {
    Model m = tiny_model(2, {});
    const std::vector<LabeledSequence> batch{{{{}, {}, {}}, {0, 1, 0}}};
    const auto r = nll_and_gradient(m, batch);
    CHECK(r.value == doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(r.value >= 0.0);
  }
  SUBCASE("label out of range") {
    Model m = tiny_model(2, {});
    const std::vector<LabeledSequence> batch{{{{}}, {2}}};
    CHECK_THROWS_AS(nll_and_gradient(m, batch), UsageError);
  }
  SUBCASE("length mismatch") {
    Model m = tiny_model(2, {});
    const std::vector<LabeledSequence> batch{{{{}, {}}, {0}}};
    CHECK_THROWS_AS(nll_and_gradient(m, batch), UsageError);
  }
  SUBCASE("gold-path probability in (0, 1]") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> w(0.0, 1.0);
    Model m = tiny_model(3, {"a", "b", "c"});
    for (double& x : m.unigram.data()) x = w(rng);
    for (double& x : m.transition.data()) x = w(rng);
    const std::vector<FeatureVector> vecs{{{"a", 1.0}}, {{"b", 1.0}, {"c", 0.5}}, {{"a", 1.0}}};
    for (std::size_t g = 0; g < 27; ++g) {
      const std::vector<std::size_t> gold{g % 3, (g / 3) % 3, g / 9};
      const auto lat = build_lattice(m, std::span<const FeatureVector>(vecs));
      const double p = std::exp(path_score(lat, gold) - log_partition(lat));
      CHECK(p > 0.0);
      CHECK(p <= 1.0);
    }
  }
}
