#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "peerturbo/galois.hpp"

using peerturbo::gf::Element;
using peerturbo::gf::Field;

TEST_CASE("gf256 addition is xor") {
  const auto& f = Field::gf256();
  CHECK(f.add(0x57, 0x83) == 0xD4);
  for (unsigned x = 0; x < 256; ++x) {
    CHECK(f.add(static_cast<Element>(x), 0) == x);
    CHECK(f.add(static_cast<Element>(x), static_cast<Element>(x)) == 0);
  }
}

TEST_CASE("gf2 arithmetic") {
  const auto& f = Field::gf2();
  CHECK(f.order() == 2);
  CHECK(f.add(1, 1) == 0);
  CHECK(f.add(1, 0) == 1);
  CHECK(f.mul(1, 1) == 1);
  CHECK(f.mul(1, 0) == 0);
  CHECK(f.inv(1) == 1);
  CHECK_THROWS_AS(f.inv(0), peerturbo::gf::DivisionByZero);
  CHECK(f.contains(1));
  CHECK_FALSE(f.contains(2));
}

TEST_CASE("gf256 multiplication matches the carry-less oracle on every pair") {
  const auto& f = Field::gf256();
  CHECK(oracle::clmul_reduce(0x53, 0xCA) == 0x01);
  CHECK(f.mul(0x53, 0xCA) == 0x01);
  for (unsigned a = 0; a < 256; ++a) {
    CHECK(f.mul(static_cast<Element>(a), 1) == a);
    for (unsigned b = 0; b < 256; ++b) {
      const auto ea = static_cast<Element>(a), eb = static_cast<Element>(b);
      if (f.mul(ea, eb) != oracle::clmul_reduce(ea, eb)) {
        FAIL("mismatch at " << a << " * " << b);
      }
    }
  }
}

TEST_CASE("gf256 inverse is exhaustive and zero is rejected") {
  const auto& f = Field::gf256();
  CHECK(f.inv(1) == 1);
  for (unsigned a = 1; a < 256; ++a) {
    const auto e = static_cast<Element>(a);
    REQUIRE(f.mul(e, f.inv(e)) == 1);
    CHECK(f.div(e, e) == 1);
  }
  CHECK_THROWS_AS(f.inv(0), peerturbo::gf::DivisionByZero);
  CHECK_THROWS_WITH(f.inv(0), doctest::Contains("division by zero"));
}

TEST_CASE("field axioms on random triples") {
  const auto& f = Field::gf256();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int t = 0; t < 20000; ++t) {
    const auto a = static_cast<Element>(byte(rng));
    const auto b = static_cast<Element>(byte(rng));
    const auto c = static_cast<Element>(byte(rng));
    REQUIRE(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
    REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
    REQUIRE(f.add(a, b) == f.add(b, a));
    REQUIRE(f.mul(a, b) == f.mul(b, a));
    REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
  }
}

TEST_CASE("bulk kernels agree with scalar arithmetic") {
  const auto& f = Field::gf256();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int t = 0; t < 50; ++t) {
    std::vector<Element> x(37), y(37);
    for (auto& e : x) e = static_cast<Element>(byte(rng));
    for (auto& e : y) e = static_cast<Element>(byte(rng));
    const auto c = static_cast<Element>(byte(rng));

    auto z = y;
    f.axpy(z, c, x);
    Element dot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      REQUIRE(z[i] == (y[i] ^ oracle::clmul_reduce(c, x[i])));
      dot ^= oracle::clmul_reduce(x[i], y[i]);
    }
    CHECK(f.dot(x, y) == dot);

    auto s = x;
    f.scale(s, c);
    for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(s[i] == oracle::clmul_reduce(c, x[i]));
  }
}

TEST_CASE("only q = 2 and q = 256 are supported") {
  CHECK(Field::of(2).order() == 2);
  CHECK(Field::of(256).order() == 256);
  CHECK_THROWS_AS(Field::of(3), std::invalid_argument);
  CHECK_THROWS_AS(Field::of(65536), std::invalid_argument);
}
