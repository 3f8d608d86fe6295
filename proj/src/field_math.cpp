#include "mvc/field_math.hpp"

#include "mvc/errors.hpp"

#include <memory>
#include <string>

namespace mvc {

namespace {

// Carry-less multiply reduced by `modulus`; only used to build tables.
unsigned slow_mul(unsigned a, unsigned b, unsigned bits, unsigned modulus) {
  unsigned product = 0;
  while (b != 0) {
    if (b & 1u) product ^= a;
    b >>= 1;
    a <<= 1;
    if (a & (1u << bits)) a ^= modulus;
  }
  return product;
}

constexpr std::array<unsigned, 9> kStandardModulus = {0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11B};

}  // namespace

GaloisField::GaloisField(unsigned bits, unsigned modulus) : bits_(bits), modulus_(modulus) {
  if (bits < 2 || bits > 8) throw PreconditionError("field width must be in [2, 8] bits");
  if ((modulus >> bits) != 1u) {
    throw PreconditionError("modulus degree must equal the field width");
  }
  const unsigned order = (1u << bits) - 1;
  // The multiplicative group of a field is cyclic; search its smallest generator.
  for (unsigned g = 2; g <= order && generator_ == 0; ++g) {
    unsigned x = 1;
    unsigned k = 0;
    do {
      x = slow_mul(x, g, bits, modulus);
      ++k;
    } while (x != 1 && k <= order);
    if (x == 1 && k == order) generator_ = static_cast<FieldElement>(g);
  }
  if (generator_ == 0) throw PreconditionError("modulus is not irreducible");

  unsigned x = 1;
  for (unsigned k = 0; k < order; ++k) {
    exp_[k] = static_cast<std::uint8_t>(x);
    exp_[k + order] = static_cast<std::uint8_t>(x);
    log_[x] = static_cast<std::uint8_t>(k);
    x = slow_mul(x, generator_, bits, modulus);
  }
}

const GaloisField& GaloisField::gf256() { return standard(8); }

const GaloisField& GaloisField::standard(unsigned bits) {
  if (bits < 2 || bits > 8) throw PreconditionError("field width must be in [2, 8] bits");
  // Built once, on first use; static init is thread-safe.
  static const auto fields = [] {
    std::array<std::unique_ptr<GaloisField>, 9> f;
    for (unsigned w = 2; w <= 8; ++w) f[w] = std::make_unique<GaloisField>(w, kStandardModulus[w]);
    return f;
  }();
  return *fields[bits];
}

FieldElement GaloisField::inv(FieldElement a) const {
  if (a == 0) throw DomainError("inverse of zero");
  if (!contains(a)) throw PreconditionError("element outside the field");
  const unsigned order = (1u << bits_) - 1;
  return exp_[(order - log_[a]) % order];
}

FieldElement GaloisField::div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }

FieldElement field_arith(FieldElement a, FieldElement b, ArithKind kind) {
  const auto& f = GaloisField::gf256();
  switch (kind) {
    case ArithKind::add: return f.add(a, b);
    case ArithKind::mul: return f.mul(a, b);
    case ArithKind::inv_of_a: return f.inv(a);
  }
  throw PreconditionError("unknown arithmetic kind");
}

namespace {

void require_distinct(std::span<const FieldElement> points, const GaloisField& field) {
  std::array<bool, 256> seen{};
  for (FieldElement p : points) {
    if (!field.contains(p)) throw PreconditionError("evaluation point outside the field");
    if (seen[p]) throw PreconditionError("duplicate evaluation point " + std::to_string(p));
    seen[p] = true;
  }
}

}  // namespace

EvalCodeword eval_encode(std::span<const FieldElement> message, std::span<const FieldElement> points,
                         const GaloisField& field) {
  if (message.empty()) throw PreconditionError("message must hold at least one symbol");
  if (message.size() > field.size()) throw PreconditionError("message longer than the field size");
  require_distinct(points, field);
  EvalCodeword cw;
  cw.point_ids.assign(points.begin(), points.end());
  cw.values.reserve(points.size());
  for (FieldElement x : points) {
    // Horner
    FieldElement acc = 0;
    for (auto it = message.rbegin(); it != message.rend(); ++it) acc = field.add(field.mul(acc, x), *it);
    cw.values.push_back(acc);
  }
  return cw;
}

std::vector<FieldElement> interpolate(const EvalCodeword& codeword, std::size_t length,
                                      const GaloisField& field) {
  if (codeword.point_ids.size() != codeword.values.size()) {
    throw PreconditionError("codeword points and values differ in length");
  }
  if (length == 0) throw PreconditionError("interpolation length must be positive");
  require_distinct(codeword.point_ids, field);
  if (codeword.size() < length) {
    throw InsufficientDataError("need " + std::to_string(length) + " evaluations, have " +
                                std::to_string(codeword.size()));
  }

  // Solve the L x L Vandermonde system by Gauss-Jordan elimination.
  const std::size_t n = length;
  std::vector<std::vector<FieldElement>> m(n, std::vector<FieldElement>(n + 1));
  for (std::size_t r = 0; r < n; ++r) {
    FieldElement power = 1;
    for (std::size_t c = 0; c < n; ++c) {
      m[r][c] = power;
      power = field.mul(power, codeword.point_ids[r]);
    }
    m[r][n] = codeword.values[r];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    // distinct points make the Vandermonde matrix nonsingular
    if (pivot == n) throw DomainError("singular interpolation system");
    std::swap(m[pivot], m[col]);
    const FieldElement scale = field.inv(m[col][col]);
    for (auto& e : m[col]) e = field.mul(e, scale);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const FieldElement factor = m[r][col];
      for (std::size_t c = col; c <= n; ++c) m[r][c] = field.add(m[r][c], field.mul(factor, m[col][c]));
    }
  }
  std::vector<FieldElement> coefficients(n);
  for (std::size_t r = 0; r < n; ++r) coefficients[r] = m[r][n];
  return coefficients;
}

}  // namespace mvc
