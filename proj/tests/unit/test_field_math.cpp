#include "mvc/errors.hpp"
#include "mvc/field_math.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace mvc;

namespace {

// shift-and-add multiply reduced by the modulus, independent of the tables
unsigned peasant(unsigned a, unsigned b, unsigned bits, unsigned modulus) {
  unsigned r = 0;
  while (b) {
    if (b & 1) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a & (1u << bits)) a ^= modulus;
  }
  return r;
}

}  // namespace

TEST_SUITE("field_math") {
  TEST_CASE("gf256 add is xor and one is the identity") {
    CHECK(field_arith(0x02, 0x03, ArithKind::add) == 0x01);
    for (unsigned a = 0; a < 256; ++a) CHECK(field_arith(a, 0x01, ArithKind::mul) == a);
  }

  TEST_CASE("inverse of 0x53 by exhaustive scan") {
    unsigned found = 0;
    for (unsigned b = 1; b < 256; ++b)
      if (peasant(0x53, b, 8, 0x11B) == 1) found = b;
    CHECK(found == 0xCA);
    CHECK(field_arith(0x53, 0, ArithKind::inv_of_a) == found);
  }

  TEST_CASE("table multiply agrees with shift-and-add in every width") {
    const unsigned moduli[] = {0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11B};
    for (unsigned w = 2; w <= 8; ++w) {
      const auto& f = GaloisField::standard(w);
      CHECK(f.size() == (std::size_t{1} << w));
      for (unsigned a = 0; a < f.size(); ++a) {
        for (unsigned b = 0; b < f.size(); ++b) {
          REQUIRE(f.mul(a, b) == peasant(a, b, w, moduli[w]));
        }
        if (a) CHECK(f.mul(a, f.inv(a)) == 1);
      }
    }
  }

  TEST_CASE("inverting zero is a domain error") {
    CHECK_THROWS_AS(GaloisField::gf256().inv(0), DomainError);
    CHECK_THROWS_AS(GaloisField::gf256().div(1, 0), DomainError);
  }

  TEST_CASE("reducible modulus is rejected") {
    CHECK_THROWS(GaloisField(4, 0x15));  // x^4+x^2+1 = (x^2+x+1)^2
  }

  TEST_CASE("evaluation of small polynomials") {
    const std::vector<FieldElement> five{5};
    for (FieldElement p : {0, 1, 7, 200}) {
      const std::vector<FieldElement> pts{p};
      CHECK(eval_encode(five, pts).values == std::vector<FieldElement>{5});
    }
    const std::vector<FieldElement> msg{1, 1};
    const std::vector<FieldElement> pts{0, 1};
    CHECK(eval_encode(msg, pts).values == std::vector<FieldElement>{1, 0});
  }

  TEST_CASE("duplicate points are rejected") {
    const std::vector<FieldElement> msg{1, 2};
    const std::vector<FieldElement> pts{3, 3};
    CHECK_THROWS_AS(eval_encode(msg, pts), PreconditionError);
  }

  TEST_CASE("single pair interpolates to its value") {
    EvalCodeword cw{{9}, {77}};
    CHECK(interpolate(cw, 1) == std::vector<FieldElement>{77});
  }

  TEST_CASE("too few pairs is insufficient data") {
    const std::vector<FieldElement> msg{1, 2, 3};
    const std::vector<FieldElement> pts{4, 5};
    const auto cw = eval_encode(msg, pts);
    CHECK_THROWS_AS(interpolate(cw, 3), InsufficientDataError);
  }

  TEST_CASE("any L of K evaluations recover the message") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
      const unsigned w = 2 + rng() % 7;
      const auto& f = GaloisField::standard(w);
      const std::size_t k = 1 + rng() % std::min<std::size_t>(f.size(), 12);
      const std::size_t l = 1 + rng() % k;
      std::vector<FieldElement> all(f.size());
      std::iota(all.begin(), all.end(), 0);
      std::shuffle(all.begin(), all.end(), rng);
      const std::vector<FieldElement> pts(all.begin(), all.begin() + k);
      std::vector<FieldElement> msg(l);
      for (auto& m : msg) m = static_cast<FieldElement>(rng() % f.size());
      const auto cw = eval_encode(msg, pts, f);

      std::vector<std::size_t> pick(k);
      std::iota(pick.begin(), pick.end(), 0);
      std::shuffle(pick.begin(), pick.end(), rng);
      EvalCodeword sub;
      for (std::size_t i = 0; i < l; ++i) {
        sub.point_ids.push_back(cw.point_ids[pick[i]]);
        sub.values.push_back(cw.values[pick[i]]);
      }
      REQUIRE(interpolate(sub, l, f) == msg);
    }
  }
}
