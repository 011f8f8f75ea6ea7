#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpukdv/spectral_core.hpp"

#include <random>

using namespace fpukdv;

namespace {

const double kPi = std::numbers::pi;

Field random_field(const LatticeGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Field f(g);
  for (int j = 0; j < g.size(); ++j) f.values[j] = u(rng);
  return f;
}

// direct summation of the normalized transform
Spectrum direct_dft(const Field& f) {
  Spectrum F(f.grid);
  for (int k = -f.grid.n; k < f.grid.n; ++k) {
    Complex acc = 0;
    for (int j = 0; j < f.grid.size(); ++j) acc += f.values[j] * std::polar(1.0, -f.grid.x(j) * k);
    F(k) = f.grid.h / std::sqrt(2 * kPi) * acc;
  }
  return F;
}

double max_abs(const Eigen::VectorXcd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("grid layout") {
  const LatticeGrid g(8);
  CHECK(g.size() == 16);
  CHECK(g.h * 2 * g.n == doctest::Approx(2 * kPi).epsilon(1e-15));
  const auto m = g.modes();
  REQUIRE(m.size() == 16);
  CHECK(m.front() == -8);
  CHECK(m.back() == 7);
  CHECK_THROWS(LatticeGrid(0));
}

TEST_CASE("forward_dft examples") {
  const LatticeGrid g(4);
  const Spectrum one = forward_dft(Field::sample(g, [](double) { return 1.0; }));
  CHECK(std::abs(one(0) - std::sqrt(2 * kPi)) < 1e-14);
  for (int k = -4; k < 4; ++k)
    if (k != 0) CHECK(std::abs(one(k)) < 1e-14);

  const Spectrum c = forward_dft(Field::sample(g, [](double x) { return std::cos(x); }));
  for (int k = -4; k < 4; ++k) {
    const double expect = std::abs(k) == 1 ? std::sqrt(2 * kPi) / 2 : 0.0;
    CHECK(std::abs(c(k) - expect) < 1e-14);
  }
}

TEST_CASE("forward_dft matches direct summation") {
  std::mt19937_64 rng(1);
  for (int n : {1, 2, 3, 5, 8, 16, 27}) {
    const Field f = random_field(LatticeGrid(n), rng);
    CHECK(max_abs(forward_dft(f).coeffs - direct_dft(f).coeffs) < 1e-13);
  }
}

TEST_CASE("inverse_dft examples") {
  const LatticeGrid g(4);
  Spectrum F(g);
  F(0) = std::sqrt(2 * kPi);
  CHECK((inverse_dft(F).values.array() - 1.0).abs().maxCoeff() < 1e-14);

  Spectrum C(g);
  C(1) = C(-1) = std::sqrt(2 * kPi) / 2;
  const Field c = inverse_dft(C);
  for (int j = 0; j < g.size(); ++j) CHECK(std::abs(c.values[j] - std::cos(g.x(j))) < 1e-14);

  CHECK(inverse_dft(Spectrum(g)).values.isZero(0));

  Spectrum bad(g);
  bad(1) = 1.0;
  CHECK_THROWS_AS(inverse_dft(bad), std::domain_error);
}

TEST_CASE("round trip and Plancherel") {
  std::mt19937_64 rng(2);
  for (int n : {4, 8, 16, 32, 64, 128, 256}) {
    const LatticeGrid g(n);
    const Field f = random_field(g, rng), q = random_field(g, rng);
    CHECK((inverse_dft(forward_dft(f)).values - f.values).cwiseAbs().maxCoeff() < 1e-12);
    const double lhs = g.h * f.values.dot(q.values);
    const Complex rhs = forward_dft(f).coeffs.dot(forward_dft(q).coeffs);
    CHECK(std::abs(lhs - rhs.real()) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    CHECK(std::abs(rhs.imag()) < 1e-12);
  }
}

TEST_CASE("apply_symbol") {
  SUBCASE("laplace eigenvalue on mode 1, N=2") {
    const LatticeGrid g(2);
    Spectrum F(g);
    F(1) = 1.0;
    CHECK(apply_symbol(F, {Symbol::laplace_h})(1).real() == doctest::Approx(-8 / (kPi * kPi)).epsilon(1e-14));
    // stencil oracle on e^{ikx}
    const double h = g.h;
    const Complex st = (std::polar(1.0, h) + std::polar(1.0, -h) - 2.0) / (h * h);
    CHECK(std::abs(st - apply_symbol(F, {Symbol::laplace_h})(1)) < 1e-14);
  }
  SUBCASE("nabla inverse undoes nabla") {
    std::mt19937_64 rng(3);
    const LatticeGrid g(16);
    Spectrum F = project_nyquist(forward_dft(random_field(g, rng)));
    F(0) = 0;
    const Spectrum back = apply_symbol(apply_symbol(F, {Symbol::nabla_h}), {Symbol::nabla_h_inverse});
    CHECK(max_abs(back.coeffs - F.coeffs) < 1e-13);
    Spectrum G = F;
    G(0) = 1.0;
    CHECK_THROWS_WITH(apply_symbol(G, {Symbol::nabla_h_inverse}), "nabla_h_inverse: nonzero mean");
  }
  SUBCASE("partial_h kills constants") {
    const LatticeGrid g(6);
    Spectrum F(g);
    F(0) = 3.0;
    CHECK(apply_symbol(F, {Symbol::partial_h}).coeffs.isZero(0));
  }
  SUBCASE("multipliers") {
    const double h = kPi / 8;
    for (int k = -8; k < 8; ++k) {
      const double sg = 2 / h * std::sin(h * k / 2);
      CHECK(std::abs(symbol_value<double>({Symbol::nabla_h}, k, h) - Complex(0, sg)) < 1e-14);
      CHECK(symbol_value<double>({Symbol::abs_nabla_h}, k, h).real() == doctest::Approx(std::abs(sg)));
      CHECK(symbol_value<double>({Symbol::bracket_nabla_h}, k, h).real() == doctest::Approx(std::sqrt(1 + sg * sg)));
      CHECK(symbol_value<double>({Symbol::bracket_k_power, 1.5}, k, h).real() ==
            doctest::Approx(std::pow(1.0 + k * k, 0.75)));
      CHECK(symbol_value<double>({Symbol::abs_nabla_h}, k, h).real() ==
            doctest::Approx(std::sqrt(-symbol_value<double>({Symbol::laplace_h}, k, h).real())));
    }
  }
}

TEST_CASE("laplace symbol matches stencil on random fields") {
  std::mt19937_64 rng(4);
  for (int n : {3, 8, 32}) {
    const LatticeGrid g(n);
    const Field f = random_field(g, rng);
    const Field L = inverse_dft(apply_symbol(forward_dft(f), {Symbol::laplace_h}));
    const int m = g.size();
    for (int j = 0; j < m; ++j) {
      const double st = (f.values[(j + 1) % m] + f.values[(j + m - 1) % m] - 2 * f.values[j]) / (g.h * g.h);
      CHECK(std::abs(st - L.values[j]) * g.h * g.h < 1e-12);
    }
  }
}

TEST_CASE("forward_difference") {
  const LatticeGrid g(2);
  CHECK(forward_difference(Field::sample(g, [](double) { return 2.0; })).values.isZero(0));
  const Field c = forward_difference(Field::sample(g, [](double x) { return std::cos(x); }));
  CHECK(c.values[0] == doctest::Approx(-2 / kPi).epsilon(1e-14));
  std::mt19937_64 rng(5);
  const LatticeGrid g8(8);
  const Field a = random_field(g8, rng), b = random_field(g8, rng);
  Field ab(g8, (2.0 * a.values - 3.0 * b.values).eval());
  const Eigen::VectorXd lin = 2.0 * forward_difference(a).values - 3.0 * forward_difference(b).values;
  CHECK((forward_difference(ab).values - lin).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("norms") {
  const LatticeGrid g(8);
  const Field one = Field::sample(g, [](double) { return 1.0; });
  CHECK(lp_norm(one, 2.0) == doctest::Approx(std::sqrt(2 * kPi)));
  CHECK(lp_norm(one, std::numeric_limits<double>::infinity()) == 1.0);
  CHECK_THROWS(lp_norm(one, 0.5));
  std::mt19937_64 rng(6);
  const Field f = random_field(g, rng);
  const Spectrum F = forward_dft(f);
  CHECK(hs_norm(F, 0.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-13));
  CHECK(hs_norm(F, 1.0) >= hs_norm(F, 0.0));
  CHECK(l2_norm(F) == doctest::Approx(hs_norm(F, 0.0)));
  // <nabla_h> <= <k> pointwise, so the variant norm is never larger
  CHECK(hs_norm_nabla(F, 1.0) <= hs_norm(F, 1.0) + 1e-12);
}

TEST_CASE("spectral_product") {
  const LatticeGrid g(8);
  Spectrum one(g);
  one(0) = std::sqrt(2 * kPi);
  CHECK(std::abs(spectral_product(one, one)(0) - std::sqrt(2 * kPi)) < 1e-13);

  std::mt19937_64 rng(7);
  const Field f = random_field(g, rng), q = random_field(g, rng);
  Field fq(g, f.values.cwiseProduct(q.values));
  CHECK(max_abs(spectral_product(forward_dft(f), forward_dft(q)).coeffs - forward_dft(fq).coeffs) < 1e-12);

  // cos * cos = 1/2 + cos(2x)/2
  Spectrum C(g);
  C(1) = C(-1) = std::sqrt(2 * kPi) / 2;
  const Spectrum P = spectral_product(C, C);
  Spectrum expect(g);
  expect(0) = std::sqrt(2 * kPi) / 2;
  expect(2) = expect(-2) = std::sqrt(2 * kPi) / 4;
  CHECK(max_abs(P.coeffs - expect.coeffs) < 1e-14);
  CHECK(max_abs(spectral_product(C, C, ProductMode::dealiased).coeffs - expect.coeffs) < 1e-14);

  CHECK_THROWS(spectral_product(C, Spectrum(LatticeGrid(4))));
}

TEST_CASE("dealiased product is the truncated convolution") {
  std::mt19937_64 rng(8);
  for (int n : {2, 5, 12}) {
    const LatticeGrid g(n);
    const Spectrum F = project_nyquist(forward_dft(random_field(g, rng)));
    const Spectrum G = project_nyquist(forward_dft(random_field(g, rng)));
    const Spectrum P = spectral_product(F, G, ProductMode::dealiased);
    for (int k = -(n - 1); k < n; ++k) {
      Complex acc = 0;
      for (int k1 = -(n - 1); k1 < n; ++k1) {
        const int k2 = k - k1;
        if (std::abs(k2) < n) acc += F(k1) * G(k2);
      }
      CHECK(std::abs(P(k) - acc / std::sqrt(2 * kPi)) < 1e-13);
    }
    CHECK(P(-n) == Complex(0));
  }
}

TEST_CASE("Sobolev embedding probe stays bounded") {
  std::mt19937_64 rng(9);
  for (double s : {0.25, 0.5}) {
    const double q = s < 0.5 ? 2 / (1 - 2 * s) : 1e9;
    std::vector<double> worst;
    for (int n : {8, 32, 128}) {
      const LatticeGrid g(n);
      double w = 0;
      for (int trial = 0; trial < 100; ++trial) {
        const Field f = random_field(g, rng);
        const double num = q > 1e8 ? lp_norm(f, std::numeric_limits<double>::infinity()) : lp_norm(f, q);
        w = std::max(w, num / hs_norm(forward_dft(f), s + 0.05));
      }
      worst.push_back(w);
    }
    MESSAGE("s=" << s << " embedding ratios " << worst[0] << " " << worst[1] << " " << worst[2]);
    CHECK(std::isfinite(worst.back()));
  }
}
