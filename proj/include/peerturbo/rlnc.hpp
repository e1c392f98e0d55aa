#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "peerturbo/galois.hpp"
#include "peerturbo/random.hpp"

namespace peerturbo::rlnc {

using gf::Element;

/// k data shards of l symbols each, stored row-major.
class Payload {
 public:
  Payload(std::size_t k, std::size_t l);
  Payload(std::size_t k, std::size_t l, std::vector<Element> data);

  static Payload random(const gf::Field& field, std::size_t k, std::size_t l, RandomStream& rng);

  std::size_t k() const { return k_; }
  std::size_t l() const { return l_; }
  std::span<const Element> row(std::size_t i) const { return {data_.data() + i * l_, l_}; }
  std::span<Element> row(std::size_t i) { return {data_.data() + i * l_, l_}; }
  const std::vector<Element>& data() const { return data_; }

  friend bool operator==(const Payload&, const Payload&) = default;

 private:
  std::size_t k_;
  std::size_t l_;
  std::vector<Element> data_;
};

/// Coefficients are always relative to the original data shards, so shards
/// recoded any number of hops away are still directly decodable.
struct CodedShard {
  std::vector<Element> coeffs;
  std::vector<Element> symbols;

  /// Canonical byte layout: k coefficient bytes followed by l symbol bytes.
  std::vector<std::uint8_t> to_bytes() const;
  static CodedShard from_bytes(std::span<const std::uint8_t> bytes, std::size_t k);

  friend bool operator==(const CodedShard&, const CodedShard&) = default;
};

class NothingToRecode : public std::logic_error {
 public:
  NothingToRecode() : std::logic_error("nothing to recode: decoder rank is 0") {}
};

class InsufficientRank : public std::runtime_error {
 public:
  InsufficientRank(std::size_t rank, std::size_t k);
  std::size_t rank() const { return rank_; }

 private:
  std::size_t rank_;
};

/// Random source shard: coefficients uniform over F_q^k (all-zero redrawn),
/// symbols = coeffs * data.
CodedShard make_source_shard(const gf::Field& field, const Payload& payload, RandomStream& rng);

/// Encodes a shard with the given coefficient vector.
CodedShard encode(const gf::Field& field, const Payload& payload, std::span<const Element> coeffs);

/// Incremental decoder holding the span of everything received so far.
///
/// The basis is kept in reduced row-echelon form: every row has a distinct
/// pivot column, the pivot entry is 1, and every other row is zero in that
/// column. Each row stores its k coefficients followed by its l symbols.
class Decoder {
 public:
  Decoder(const gf::Field& field, std::size_t k, std::size_t l);

  const gf::Field& field() const { return *field_; }
  std::size_t k() const { return k_; }
  std::size_t l() const { return l_; }
  std::size_t rank() const { return rows_.size() / width(); }
  bool complete() const { return rank() == k_; }

  /// Eliminates `shard` against the basis. Returns true and grows the rank by
  /// one iff a nonzero residual remains. Throws std::invalid_argument on a
  /// length mismatch.
  bool absorb(const CodedShard& shard);

  /// Uniformly random nonzero combination of the basis rows.
  CodedShard recode(RandomStream& rng) const;

  /// Requires rank == k; throws InsufficientRank otherwise.
  Payload decode() const;

  /// True iff `coeffs` lies in the current span. Does not modify the state.
  bool contains(std::span<const Element> coeffs) const;

  std::span<const Element> basis_coeffs(std::size_t r) const {
    return {rows_.data() + r * width(), k_};
  }
  std::span<const Element> basis_symbols(std::size_t r) const {
    return {rows_.data() + r * width() + k_, l_};
  }
  /// Pivot column of basis row r.
  std::size_t pivot(std::size_t r) const { return pivots_[r]; }

 private:
  std::size_t width() const { return k_ + l_; }
  std::span<Element> row(std::size_t r) { return {rows_.data() + r * width(), width()}; }
  std::span<const Element> row(std::size_t r) const {
    return {rows_.data() + r * width(), width()};
  }
  void reduce(std::span<Element> v) const;

  const gf::Field* field_;
  std::size_t k_;
  std::size_t l_;
  std::vector<Element> rows_;
  std::vector<std::size_t> pivots_;
  // pivot column -> basis row, or npos
  std::vector<std::size_t> row_of_pivot_;
};

/// Upper bound q^-(rank_sender - rank_receiver) on the probability that a
/// random recoded shard from the sender falls in the receiver's span.
/// Throws std::invalid_argument unless rank_sender > rank_receiver.
double innovation_bound(std::size_t rank_sender, std::size_t rank_receiver, unsigned q);

}  // namespace peerturbo::rlnc
