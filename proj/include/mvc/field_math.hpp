#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mvc {

// A GF(2^w) element, w <= 8, stored in the low bits of a byte.
using FieldElement = std::uint8_t;

// Binary extension field GF(2^w), 2 <= w <= 8, with log/antilog tables.
class GaloisField {
 public:
  GaloisField(unsigned bits, unsigned modulus);

  // GF(2^8) / 0x11B.
  static const GaloisField& gf256();
  // Shared instance with a fixed irreducible modulus for 2 <= bits <= 8.
  static const GaloisField& standard(unsigned bits);

  unsigned bits() const noexcept { return bits_; }
  unsigned modulus() const noexcept { return modulus_; }
  std::size_t size() const noexcept { return std::size_t{1} << bits_; }
  FieldElement generator() const noexcept { return generator_; }

  FieldElement add(FieldElement a, FieldElement b) const noexcept { return a ^ b; }
  FieldElement mul(FieldElement a, FieldElement b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  FieldElement inv(FieldElement a) const;  // DomainError on 0
  FieldElement div(FieldElement a, FieldElement b) const;

  bool contains(FieldElement a) const noexcept { return a < size(); }

 private:
  unsigned bits_;
  unsigned modulus_;
  FieldElement generator_ = 0;
  std::array<std::uint8_t, 256> log_{};
  std::array<std::uint8_t, 512> exp_{};
};

enum class ArithKind { add, mul, inv_of_a };

// GF(2^8) arithmetic; `b` is ignored for inv_of_a.
FieldElement field_arith(FieldElement a, FieldElement b, ArithKind kind);

// Evaluations of one polynomial at distinct points.
struct EvalCodeword {
  std::vector<FieldElement> point_ids;
  std::vector<FieldElement> values;

  std::size_t size() const noexcept { return values.size(); }
  bool operator==(const EvalCodeword&) const = default;
};

// values[j] = P(points[j]) with P's coefficient vector = message (degree < L).
EvalCodeword eval_encode(std::span<const FieldElement> message,
                         std::span<const FieldElement> points,
                         const GaloisField& field = GaloisField::gf256());

// The unique degree-<L coefficient vector through the first L pairs.
std::vector<FieldElement> interpolate(const EvalCodeword& codeword, std::size_t length,
                                      const GaloisField& field = GaloisField::gf256());

}  // namespace mvc
