#include "peerturbo/rlnc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace peerturbo::rlnc {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

Element random_element(const gf::Field& field, RandomStream& rng) {
  return static_cast<Element>(rng.below(field.order()));
}

bool all_zero(std::span<const Element> v) {
  return std::all_of(v.begin(), v.end(), [](Element e) { return e == 0; });
}

}  // namespace

Payload::Payload(std::size_t k, std::size_t l) : Payload(k, l, std::vector<Element>(k * l)) {}

Payload::Payload(std::size_t k, std::size_t l, std::vector<Element> data)
    : k_(k), l_(l), data_(std::move(data)) {
  if (k == 0 || l == 0) throw std::invalid_argument("payload needs k >= 1 and l >= 1");
  if (data_.size() != k * l) throw std::invalid_argument("payload data must hold k*l symbols");
}

Payload Payload::random(const gf::Field& field, std::size_t k, std::size_t l, RandomStream& rng) {
  Payload p(k, l);
  for (auto& e : p.data_) e = random_element(field, rng);
  return p;
}

std::vector<std::uint8_t> CodedShard::to_bytes() const {
  std::vector<std::uint8_t> out;
  out.reserve(coeffs.size() + symbols.size());
  out.insert(out.end(), coeffs.begin(), coeffs.end());
  out.insert(out.end(), symbols.begin(), symbols.end());
  return out;
}

CodedShard CodedShard::from_bytes(std::span<const std::uint8_t> bytes, std::size_t k) {
  if (bytes.size() < k) throw std::invalid_argument("shard buffer shorter than k coefficients");
  CodedShard s;
  s.coeffs.assign(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(k));
  s.symbols.assign(bytes.begin() + static_cast<std::ptrdiff_t>(k), bytes.end());
  return s;
}

InsufficientRank::InsufficientRank(std::size_t rank, std::size_t k)
    : std::runtime_error("insufficient degrees of freedom: rank " + std::to_string(rank) +
                         " of " + std::to_string(k)),
      rank_(rank) {}

CodedShard encode(const gf::Field& field, const Payload& payload, std::span<const Element> coeffs) {
  if (coeffs.size() != payload.k()) throw std::invalid_argument("coefficient length must equal k");
  CodedShard s;
  s.coeffs.assign(coeffs.begin(), coeffs.end());
  s.symbols.assign(payload.l(), 0);
  for (std::size_t i = 0; i < payload.k(); ++i) field.axpy(s.symbols, coeffs[i], payload.row(i));
  return s;
}

CodedShard make_source_shard(const gf::Field& field, const Payload& payload, RandomStream& rng) {
  std::vector<Element> coeffs(payload.k());
  do {
    for (auto& c : coeffs) c = random_element(field, rng);
  } while (all_zero(coeffs));
  return encode(field, payload, coeffs);
}

Decoder::Decoder(const gf::Field& field, std::size_t k, std::size_t l)
    : field_(&field), k_(k), l_(l), row_of_pivot_(k, npos) {
  if (k == 0 || l == 0) throw std::invalid_argument("decoder needs k >= 1 and l >= 1");
  rows_.reserve(k * width());
  pivots_.reserve(k);
}

void Decoder::reduce(std::span<Element> v) const {
  // RREF rows are zero at every other pivot column, so one pass suffices.
  for (std::size_t r = 0; r < pivots_.size(); ++r) {
    const Element c = v[pivots_[r]];
    if (c != 0) field_->axpy(v, c, row(r));
  }
}

bool Decoder::absorb(const CodedShard& shard) {
  if (shard.coeffs.size() != k_ || shard.symbols.size() != l_) {
    throw std::invalid_argument("shard shape (" + std::to_string(shard.coeffs.size()) + ", " +
                                std::to_string(shard.symbols.size()) + ") does not match decoder (" +
                                std::to_string(k_) + ", " + std::to_string(l_) + ")");
  }
  if (complete()) return false;

  std::vector<Element> v(width());
  std::copy(shard.coeffs.begin(), shard.coeffs.end(), v.begin());
  std::copy(shard.symbols.begin(), shard.symbols.end(), v.begin() + static_cast<std::ptrdiff_t>(k_));
  reduce(v);

  std::size_t p = 0;
  while (p < k_ && v[p] == 0) ++p;
  if (p == k_) return false;

  field_->scale(v, field_->inv(v[p]));
  for (std::size_t r = 0; r < pivots_.size(); ++r) {
    auto existing = row(r);
    const Element c = existing[p];
    if (c != 0) field_->axpy(existing, c, v);
  }
  row_of_pivot_[p] = pivots_.size();
  pivots_.push_back(p);
  rows_.insert(rows_.end(), v.begin(), v.end());
  return true;
}

bool Decoder::contains(std::span<const Element> coeffs) const {
  if (coeffs.size() != k_) throw std::invalid_argument("coefficient length must equal k");
  std::vector<Element> v(coeffs.begin(), coeffs.end());
  for (std::size_t r = 0; r < pivots_.size(); ++r) {
    const Element c = v[pivots_[r]];
    if (c != 0) field_->axpy(v, c, basis_coeffs(r));
  }
  return all_zero(v);
}

CodedShard Decoder::recode(RandomStream& rng) const {
  const std::size_t n = rank();
  if (n == 0) throw NothingToRecode();

  // Rows are independent, so the combination is zero iff every weight is.
  std::vector<Element> weights(n);
  do {
    for (auto& w : weights) w = random_element(*field_, rng);
  } while (all_zero(weights));

  std::vector<Element> acc(width(), 0);
  for (std::size_t r = 0; r < n; ++r) field_->axpy(acc, weights[r], row(r));

  CodedShard s;
  s.coeffs.assign(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(k_));
  s.symbols.assign(acc.begin() + static_cast<std::ptrdiff_t>(k_), acc.end());
  return s;
}

Payload Decoder::decode() const {
  if (!complete()) throw InsufficientRank(rank(), k_);
  Payload out(k_, l_);
  for (std::size_t col = 0; col < k_; ++col) {
    const auto sym = basis_symbols(row_of_pivot_[col]);
    std::copy(sym.begin(), sym.end(), out.row(col).begin());
  }
  return out;
}

double innovation_bound(std::size_t rank_sender, std::size_t rank_receiver, unsigned q) {
  if (rank_sender <= rank_receiver) {
    throw std::invalid_argument("innovation bound requires rank_sender > rank_receiver (got " +
                                std::to_string(rank_sender) + " <= " +
                                std::to_string(rank_receiver) + ")");
  }
  if (q < 2) throw std::invalid_argument("field size must be >= 2");
  const double gap = static_cast<double>(rank_sender - rank_receiver);
  return std::pow(static_cast<double>(q), -gap);
}

}  // namespace peerturbo::rlnc
