#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qns/qsim/evolve.hpp"
#include "qns/qsim/hamiltonian.hpp"
#include "qns/qsim/mixer.hpp"
#include "qns/qsim/state_vector.hpp"

using namespace qns::qsim;
using std::numbers::pi;

namespace {

// Dense reference operators built by Kronecker products, independent of the
// simulator's in-place loops.
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

CMat embed(const CMat& single, std::size_t qubit, std::size_t n) {
  CMat out = CMat::Identity(1, 1);
  // basis index bit q is qubit q, so qubit n-1 is the leftmost factor
  for (std::size_t q = n; q-- > 0;) {
    const CMat f = (q == qubit) ? single : CMat::Identity(2, 2);
    CMat next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * f;
    out = next;
  }
  return out;
}

CMat pauli_x() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMat pauli_z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CVec to_eigen(const StateVector& s) {
  CVec v(static_cast<Eigen::Index>(s.dimension()));
  for (std::size_t i = 0; i < s.dimension(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
  return v;
}

StateVector random_state(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Complex> a(std::size_t{1} << n);
  double norm = 0.0;
  for (auto& x : a) {
    x = {g(rng), g(rng)};
    norm += std::norm(x);
  }
  for (auto& x : a) x /= std::sqrt(norm);
  return StateVector::from_amplitudes(std::move(a));
}

double distance(const StateVector& a, const StateVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) d += std::norm(a[i] - b[i]);
  return std::sqrt(d);
}

}  // namespace

TEST_CASE("uniform_superposition") {
  const auto s1 = uniform_superposition(1);
  CHECK(s1[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(s1[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  const auto s2 = uniform_superposition(2);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(s2[i].real() == doctest::Approx(0.5));
    CHECK(s2[i].imag() == 0.0);
  }
  const auto s3 = uniform_superposition(3);
  double total = 0.0;
  for (double p : s3.probabilities()) {
    CHECK(p == doctest::Approx(0.125));
    total += p;
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK_THROWS_AS(uniform_superposition(0), std::invalid_argument);
  CHECK_THROWS_AS(uniform_superposition(qns::max_qubits() + 1), std::invalid_argument);
}

TEST_CASE("apply_ry examples") {
  auto s = random_state(3, 1);
  const auto before = s;
  apply_ry(s, 1, 0.0);
  CHECK(distance(s, before) == 0.0);

  auto b = StateVector::basis(1, 0);
  apply_ry(b, 0, pi);
  CHECK(b.probability(1) == doctest::Approx(1.0));
  CHECK(std::abs(b[0]) < 1e-15);

  auto h = StateVector::basis(1, 0);
  apply_h(h, 0);
  apply_ry(h, 0, pi / 2);
  CHECK(h.probability(1) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(apply_ry(h, 1, 0.1), std::out_of_range);
}

TEST_CASE("H then Ry(theta) gives P(1) = (1 + sin theta)/2") {
  for (double theta = -pi; theta <= pi; theta += 0.37) {
    auto s = StateVector::basis(1, 0);
    apply_h(s, 0);
    apply_ry(s, 0, theta);
    CHECK(s.probability(1) == doctest::Approx((1.0 + std::sin(theta)) / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("single-qubit gates match Kronecker-embedded matrices") {
  const std::size_t n = 4;
  for (std::size_t q = 0; q < n; ++q) {
    CAPTURE(q);
    const auto psi = random_state(n, 10 + q);
    const CVec v = to_eigen(psi);

    CMat h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    auto s = psi;
    apply_h(s, q);
    CHECK((to_eigen(s) - embed(h, q, n) * v).norm() < 1e-12);

    s = psi;
    apply_x(s, q);
    CHECK((to_eigen(s) - embed(pauli_x(), q, n) * v).norm() < 1e-12);

    s = psi;
    apply_z(s, q);
    CHECK((to_eigen(s) - embed(pauli_z(), q, n) * v).norm() < 1e-12);

    const double theta = 0.7 + q;
    CMat ry(2, 2);
    ry << std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2), std::cos(theta / 2);
    s = psi;
    apply_ry(s, q, theta);
    CHECK((to_eigen(s) - embed(ry, q, n) * v).norm() < 1e-12);

    const CMat rx = (Complex(0, -theta / 2) * pauli_x()).exp();
    s = psi;
    apply_rx(s, q, theta);
    CHECK((to_eigen(s) - embed(rx, q, n) * v).norm() < 1e-12);
  }
}

TEST_CASE("apply_cz matches the projector formula") {
  const std::size_t n = 3;
  const auto psi = random_state(n, 77);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t t = 0; t < n; ++t) {
      if (c == t) continue;
      const CMat zc = embed(pauli_z(), c, n);
      const CMat zt = embed(pauli_z(), t, n);
      const CMat id = CMat::Identity(8, 8);
      const CMat cz = 0.5 * (id + zc + zt - zc * zt);
      auto s = psi;
      apply_cz(s, c, t);
      CHECK((to_eigen(s) - cz * to_eigen(psi)).norm() < 1e-12);
    }
  }
  auto s = psi;
  CHECK_THROWS_AS(apply_cz(s, 1, 1), std::invalid_argument);
}

TEST_CASE("Ry additivity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2 * pi, 2 * pi);
  for (int trial = 0; trial < 20; ++trial) {
    const auto psi = random_state(3, 100 + trial);
    const double a = u(rng), b = u(rng);
    auto s1 = psi;
    apply_ry(s1, trial % 3, a);
    apply_ry(s1, trial % 3, b);
    auto s2 = psi;
    apply_ry(s2, trial % 3, a + b);
    CHECK(distance(s1, s2) < 1e-9);
  }
}

TEST_CASE("phase oracle examples") {
  auto s = uniform_superposition(2);
  const auto before = s;
  apply_phase_oracle(s, [](std::uint64_t) { return false; });
  CHECK(distance(s, before) == 0.0);

  apply_phase_oracle(s, [](std::uint64_t) { return true; });
  for (std::size_t i = 0; i < 4; ++i) CHECK(s[i] == -before[i]);

  s = uniform_superposition(2);
  const std::vector<std::uint8_t> marked{0, 0, 0, 1};
  apply_phase_oracle(s, marked);
  CHECK(s[3].real() == -0.5);
  for (std::size_t i = 0; i < 3; ++i) CHECK(s[i].real() == 0.5);
}

TEST_CASE("phase oracle flips exactly the predicate's signs (n <= 10)") {
  std::mt19937_64 rng(5);
  for (std::size_t n = 1; n <= 10; ++n) {
    CAPTURE(n);
    const auto psi = random_state(n, n);
    std::vector<std::uint8_t> marked(psi.dimension());
    for (auto& m : marked) m = (rng() % 3 == 0) ? 1 : 0;
    auto a = psi;
    apply_phase_oracle(a, marked);
    auto b = psi;
    apply_phase_oracle(b, [&](std::uint64_t i) { return marked[i] != 0; });
    bool ok = true;
    for (std::size_t i = 0; i < psi.dimension(); ++i) {
      const Complex expect = marked[i] ? -psi[i] : psi[i];
      ok = ok && a[i] == expect && b[i] == expect;
    }
    CHECK(ok);
    CHECK(std::abs(a.norm_squared() - psi.norm_squared()) < 1e-15);
  }
}

TEST_CASE("diffusion examples") {
  auto u = uniform_superposition(3);
  const auto before = u;
  apply_diffusion(u);
  CHECK(distance(u, before) < 1e-15);

  auto e = StateVector::basis(1, 0);
  apply_diffusion(e);
  CHECK(e[0].real() == doctest::Approx(0.0));
  CHECK(e[1].real() == doctest::Approx(1.0));

  auto g = uniform_superposition(2);
  apply_phase_oracle(g, std::vector<std::uint8_t>{0, 0, 0, 1});
  apply_diffusion(g);
  CHECK(g[3].real() == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(g[i]) < 1e-15);
  const double theta = std::asin(0.5);
  CHECK(g.probability(3) == doctest::Approx(std::pow(std::sin(3 * theta), 2)));
}

TEST_CASE("diffusion equals 2|s><s| - I and squares to identity") {
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto psi = random_state(n, 200 + n);
    const auto dim = static_cast<Eigen::Index>(psi.dimension());
    const CVec sv = CVec::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    const CMat ud = 2.0 * sv * sv.adjoint() - CMat::Identity(dim, dim);
    auto s = psi;
    apply_diffusion(s);
    CHECK((to_eigen(s) - ud * to_eigen(psi)).norm() < 1e-12);
    CHECK(std::abs(s.norm_squared() - 1.0) < 1e-9);
    apply_diffusion(s);
    CHECK(distance(s, psi) < 1e-9);
  }
}

TEST_CASE("measure") {
  qns::Rng rng(1);
  const auto b = StateVector::basis(2, 1);
  for (int i = 0; i < 100; ++i) CHECK(measure(b, rng) == 1);

  const auto u = uniform_superposition(2);
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 10000; ++i) counts[measure(u, rng)]++;
  for (int c : counts) CHECK(std::abs(c / 10000.0 - 0.25) <= 0.03);

  qns::Rng r1(42), r2(42);
  const auto psi = random_state(4, 9);
  for (int i = 0; i < 200; ++i) CHECK(measure(psi, r1) == measure(psi, r2));
  CHECK(r1() == r2());
}

TEST_CASE("expectation") {
  const DiagonalCostHamiltonian h({0.0, 1.0, 2.0, 3.0});
  CHECK(expectation(uniform_superposition(2), h) == doctest::Approx(1.5));
  for (std::uint64_t x = 0; x < 4; ++x) CHECK(expectation(StateVector::basis(2, x), h) == h.cost(x));
  const double r = std::sqrt(0.5);
  const auto s = StateVector::from_amplitudes({r, r, 0.0, 0.0});
  CHECK(expectation(s, h) == doctest::Approx(0.5));
  CHECK_THROWS_AS(expectation(uniform_superposition(3), h), std::invalid_argument);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-5, 5);
  for (std::size_t n = 1; n <= 10; ++n) {
    std::vector<double> c(std::size_t{1} << n);
    double mean = 0.0;
    for (auto& x : c) {
      x = u(rng);
      mean += x;
    }
    mean /= static_cast<double>(c.size());
    CHECK(std::abs(expectation(uniform_superposition(n), DiagonalCostHamiltonian(c)) - mean) < 1e-12);
  }
}

TEST_CASE("cost Hamiltonian validation") {
  CHECK_THROWS_AS(DiagonalCostHamiltonian({1.0, 2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalCostHamiltonian({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalCostHamiltonian({1.0, std::nan("")}), std::invalid_argument);
  const DiagonalCostHamiltonian h({3.0, -1.0, 2.0, 0.5});
  CHECK(h.min_cost() == -1.0);
  CHECK(h.max_cost() == 3.0);
}

TEST_CASE("cost phase matches exp(-i gamma C)") {
  const DiagonalCostHamiltonian h({0.3, -1.2, 2.0, 0.0, 1.0, 5.0, -3.0, 0.1});
  const auto psi = random_state(3, 4);
  auto s = psi;
  apply_cost_phase(s, h, 0.8);
  for (std::size_t i = 0; i < 8; ++i) {
    const Complex expect = std::exp(Complex(0, -0.8 * h.cost(i))) * psi[i];
    CHECK(std::abs(s[i] - expect) < 1e-14);
  }
}

TEST_CASE("mixer spec validation") {
  CHECK_NOTHROW(MixerSpec::bit_flip(ring_graph(3), 0).validate(3));
  CHECK_THROWS_AS(MixerSpec::bit_flip(ring_graph(3), 0).validate(4), std::invalid_argument);
  CHECK_THROWS_AS(MixerSpec::bit_flip({{0}, {}}, 0).validate(2), std::invalid_argument);
  CHECK_THROWS_AS(MixerSpec::bit_flip({{5}, {}}, 0).validate(2), std::invalid_argument);
  CHECK_THROWS_AS(MixerSpec::bit_flip(ring_graph(3), 2), std::invalid_argument);
  const Graph ring = ring_graph(4);
  CHECK(ring[0] == std::vector<std::size_t>{3, 1});
}

TEST_CASE("transverse-field mixer matrix is -sum X") {
  const std::size_t n = 3;
  CMat ref = CMat::Zero(8, 8);
  for (std::size_t q = 0; q < n; ++q) ref -= embed(pauli_x(), q, n);
  const Eigen::MatrixXd m = mixer_matrix(MixerSpec::transverse_field(), n);
  CHECK((m.cast<Complex>() - ref).norm() < 1e-14);
}

TEST_CASE("bit-flip mixer matrix matches the Pauli product formula") {
  std::mt19937_64 rng(12);
  for (int b : {0, 1}) {
    for (std::size_t n : {2u, 3u, 4u, 5u}) {
      CAPTURE(b);
      CAPTURE(n);
      // random simple undirected graph
      Graph g(n);
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t w = v + 1; w < n; ++w)
          if (rng() % 2 == 0) {
            g[v].push_back(w);
            g[w].push_back(v);
          }
      const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
      const CMat id = CMat::Identity(dim, dim);
      const double sign = b == 0 ? 1.0 : -1.0;
      CMat ref = CMat::Zero(dim, dim);
      for (std::size_t v = 0; v < n; ++v) {
        CMat term = embed(pauli_x(), v, n);
        for (std::size_t w : g[v]) term = term * (id + sign * embed(pauli_z(), w, n));
        ref += std::pow(2.0, -static_cast<double>(g[v].size())) * term;
      }
      const auto spec = MixerSpec::bit_flip(g, b);
      CHECK((mixer_matrix(spec, n).cast<Complex>() - ref).norm() < 1e-12);

      const auto psi = random_state(n, 300 + n);
      const auto applied = apply_mixer_operator(spec, psi.amplitudes(), n);
      const CVec expect = ref * to_eigen(psi);
      double err = 0.0;
      for (Eigen::Index i = 0; i < dim; ++i) err += std::norm(applied[static_cast<std::size_t>(i)] - expect(i));
      CHECK(std::sqrt(err) < 1e-12);

      const double beta = 0.45;
      const MixerPropagator prop(spec, n);
      auto s = psi;
      prop.apply(s, beta);
      const CMat u = (Complex(0, -beta) * ref).exp();
      CHECK((to_eigen(s) - u * to_eigen(psi)).norm() < 1e-10);
    }
  }
}

TEST_CASE("bit-flip mixer flips v only when every neighbour holds b") {
  // path 0 - 1 - 2, b = 1: vertex 1 flips iff qubits 0 and 2 are both 1
  const Graph path{{1}, {0, 2}, {1}};
  const auto spec = MixerSpec::bit_flip(path, 1);
  const Eigen::MatrixXd m = mixer_matrix(spec, 3);
  CHECK(m(0b111, 0b101) == doctest::Approx(1.0));
  CHECK(m(0b011, 0b001) == doctest::Approx(0.0));
  // vertex 0 has neighbour 1 only
  CHECK(m(0b011, 0b010) == doctest::Approx(1.0));
  CHECK(m(0b001, 0b000) == doctest::Approx(0.0));
}

TEST_CASE("transverse-field propagator matches the matrix exponential") {
  const std::size_t n = 4;
  const auto spec = MixerSpec::transverse_field();
  const MixerPropagator prop(spec, n);
  const auto psi = random_state(n, 55);
  auto s = psi;
  prop.apply(s, 0.31);
  const CMat u = (Complex(0, -0.31) * mixer_matrix(spec, n).cast<Complex>()).exp();
  CHECK((to_eigen(s) - u * to_eigen(psi)).norm() < 1e-12);
}

TEST_CASE("evolve: constant costs keep the distribution uniform") {
  auto s = uniform_superposition(3);
  evolve(s, DiagonalCostHamiltonian(std::vector<double>(8, 0.7)), MixerSpec::transverse_field(), {5.0, 100});
  for (double p : s.probabilities()) CHECK(p == doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("evolve: large T concentrates on the unique minimum") {
  const DiagonalCostHamiltonian h({0.9, 0.6, 0.8, 0.4, 0.7, 0.0, 0.5, 0.3});
  auto s = uniform_superposition(3);
  evolve(s, h, MixerSpec::transverse_field(), {50.0, 1000});
  const auto p = s.probabilities();
  for (std::size_t i = 0; i < 8; ++i)
    if (i != 5) CHECK(p[5] > p[i]);
  CHECK(std::abs(s.norm_squared() - 1.0) < 1e-6);

  // exact diagonalization: the final ground state of H_C is |5>
  const Eigen::MatrixXd hf = instantaneous_hamiltonian(h, MixerSpec::transverse_field(), 1.0, 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hf);
  CHECK(std::abs(es.eigenvectors()(5, 0)) == doctest::Approx(1.0));
}

TEST_CASE("evolve: one step equals the product of exact exponentials") {
  const DiagonalCostHamiltonian h({0.2, 1.0, -0.5, 0.3});
  const auto mixer = MixerSpec::bit_flip(ring_graph(2), 0);
  const auto psi = random_state(2, 66);
  auto s = psi;
  const double T = 0.9;
  evolve(s, h, mixer, {T, 1});
  CMat hc = CMat::Zero(4, 4);
  for (int i = 0; i < 4; ++i) hc(i, i) = h.cost(i);
  const CMat h0 = mixer_matrix(mixer, 2).cast<Complex>();
  const CMat u = (Complex(0, -0.5 * T) * h0).exp() * (Complex(0, -0.5 * T) * hc).exp();
  CHECK((to_eigen(s) - u * to_eigen(psi)).norm() < 1e-12);
}

TEST_CASE("evolve: Trotter refinement converges") {
  const DiagonalCostHamiltonian h({0.9, 0.6, 0.8, 0.4, 0.7, 0.0, 0.5, 0.3});
  auto a = uniform_superposition(3);
  auto b = a;
  // first-order splitting: the gap shrinks as T^2 / steps, so a moderate T
  evolve(a, h, MixerSpec::transverse_field(), {5.0, 400});
  evolve(b, h, MixerSpec::transverse_field(), {5.0, 800});
  CHECK(distance(a, b) < 1e-3);
}

TEST_CASE("evolve rejects bad schedules and registers") {
  auto s = uniform_superposition(2);
  const DiagonalCostHamiltonian h({0.0, 1.0, 2.0, 3.0});
  CHECK_THROWS_AS(evolve(s, h, MixerSpec::transverse_field(), {1.0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(evolve(s, h, MixerSpec::transverse_field(), {0.0, 10}), std::invalid_argument);
  auto big = uniform_superposition(13);
  CHECK_THROWS_AS(evolve(big, DiagonalCostHamiltonian(std::vector<double>(std::size_t{1} << 13, 0.0)),
                         MixerSpec::transverse_field(), {1.0, 1}),
                  std::invalid_argument);
}

TEST_CASE("from_amplitudes validation") {
  CHECK_THROWS_AS(StateVector::from_amplitudes({1.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(StateVector::from_amplitudes({1.0, 1.0}), std::invalid_argument);
  CHECK_NOTHROW(StateVector::from_amplitudes({0.0, Complex(0, 1)}));
}
