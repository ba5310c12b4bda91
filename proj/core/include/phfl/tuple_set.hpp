#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "phfl/lts.hpp"

namespace phfl {

/// Subset of S^d stored as a bitset over tuple indices.
class TupleSet {
 public:
  TupleSet() = default;
  explicit TupleSet(std::size_t size, bool full = false);

  std::size_t size() const { return size_; }
  bool test(std::size_t i) const { return (data()[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { data()[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { data()[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::size_t count() const;
  bool empty() const;
  bool full() const;

  TupleSet& operator|=(const TupleSet& o);
  TupleSet& operator&=(const TupleSet& o);
  TupleSet complement() const;
  bool subset_of(const TupleSet& o) const;

  std::span<const std::uint64_t> words() const { return {data(), nwords_}; }
  std::size_t hash() const;

  template <class F>
  void for_each(F&& f) const {
    const std::uint64_t* words = data();
    for (std::size_t w = 0; w < nwords_; ++w) {
      std::uint64_t bits = words[w];
      while (bits) {
        int b = __builtin_ctzll(bits);
        f(w * 64 + static_cast<std::size_t>(b));
        bits &= bits - 1;
      }
    }
  }

  friend bool operator==(const TupleSet& a, const TupleSet& b);
  friend bool operator<(const TupleSet& a, const TupleSet& b);

 private:
  // Sets of up to kInline * 64 tuples live inline; larger ones on the heap.
  static constexpr std::size_t kInline = 2;
  std::uint64_t* data() { return nwords_ <= kInline ? inline_ : heap_.data(); }
  const std::uint64_t* data() const { return nwords_ <= kInline ? inline_ : heap_.data(); }
  void trim();
  std::size_t size_ = 0;
  std::size_t nwords_ = 0;
  std::uint64_t inline_[kInline] = {0, 0};
  std::vector<std::uint64_t> heap_;
};

TupleSet operator|(TupleSet a, const TupleSet& b);
TupleSet operator&(TupleSet a, const TupleSet& b);

/// Indexing of S^d. Positions are 1-based; position 1 is the least
/// significant digit of the index.
class TupleSpace {
 public:
  TupleSpace(int num_states, int arity);

  int num_states() const { return n_; }
  int arity() const { return d_; }
  std::size_t size() const { return size_; }

  StateId component(std::size_t index, int pos) const {
    return static_cast<StateId>((index / pow_[pos - 1]) % static_cast<std::size_t>(n_));
  }
  std::size_t replace(std::size_t index, int pos, StateId s) const {
    return index + (static_cast<std::size_t>(s) - component(index, pos)) * pow_[pos - 1];
  }
  std::size_t stride(int pos) const { return pow_[pos - 1]; }
  std::size_t index(std::span<const StateId> tuple) const;
  std::vector<StateId> decode(std::size_t index) const;

  TupleSet empty_set() const { return TupleSet(size_, false); }
  TupleSet full_set() const { return TupleSet(size_, true); }

 private:
  int n_;
  int d_;
  std::size_t size_;
  std::vector<std::size_t> pow_;
};

}  // namespace phfl
