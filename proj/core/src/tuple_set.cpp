#include "phfl/tuple_set.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "phfl/error.hpp"

namespace phfl {

TupleSet::TupleSet(std::size_t size, bool full) : size_(size), nwords_((size + 63) / 64) {
  std::uint64_t fill = full ? ~std::uint64_t{0} : 0;
  if (nwords_ > kInline)
    heap_.assign(nwords_, fill);
  else
    std::fill(inline_, inline_ + nwords_, fill);
  trim();
}

void TupleSet::trim() {
  if (size_ % 64 != 0 && nwords_ > 0) data()[nwords_ - 1] &= (std::uint64_t{1} << (size_ % 64)) - 1;
}

std::size_t TupleSet::count() const {
  std::size_t c = 0;
  for (auto w : words()) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool TupleSet::empty() const {
  for (auto w : words())
    if (w) return false;
  return true;
}

bool TupleSet::full() const { return count() == size_; }

TupleSet& TupleSet::operator|=(const TupleSet& o) {
  std::uint64_t* a = data();
  const std::uint64_t* b = o.data();
  for (std::size_t i = 0; i < nwords_; ++i) a[i] |= b[i];
  return *this;
}

TupleSet& TupleSet::operator&=(const TupleSet& o) {
  std::uint64_t* a = data();
  const std::uint64_t* b = o.data();
  for (std::size_t i = 0; i < nwords_; ++i) a[i] &= b[i];
  return *this;
}

TupleSet TupleSet::complement() const {
  TupleSet r = *this;
  std::uint64_t* a = r.data();
  for (std::size_t i = 0; i < nwords_; ++i) a[i] = ~a[i];
  r.trim();
  return r;
}

bool TupleSet::subset_of(const TupleSet& o) const {
  const std::uint64_t* a = data();
  const std::uint64_t* b = o.data();
  for (std::size_t i = 0; i < nwords_; ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

std::size_t TupleSet::hash() const {
  std::size_t h = size_ * 0x9e3779b97f4a7c15ull;
  for (auto w : words()) h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

bool operator==(const TupleSet& a, const TupleSet& b) {
  return a.size_ == b.size_ && std::equal(a.data(), a.data() + a.nwords_, b.data());
}

bool operator<(const TupleSet& a, const TupleSet& b) {
  auto x = a.words(), y = b.words();
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

TupleSet operator|(TupleSet a, const TupleSet& b) { return a |= b; }
TupleSet operator&(TupleSet a, const TupleSet& b) { return a &= b; }

TupleSpace::TupleSpace(int num_states, int arity) : n_(num_states), d_(arity) {
  if (num_states < 1) throw ValidationError("tuple space needs at least one state");
  if (arity < 1) throw ValidationError("arity must be at least 1");
  constexpr std::size_t kMaxTuples = std::size_t{1} << 28;
  std::size_t size = 1;
  pow_.push_back(1);
  for (int i = 0; i < arity; ++i) {
    if (size > kMaxTuples / static_cast<std::size_t>(num_states))
      throw ResourceLimit("tuple space " + std::to_string(num_states) + "^" + std::to_string(arity) + " is too large");
    size *= static_cast<std::size_t>(num_states);
    pow_.push_back(size);
  }
  size_ = size;
}

std::size_t TupleSpace::index(std::span<const StateId> tuple) const {
  if (static_cast<int>(tuple.size()) != d_) throw ValidationError("tuple length does not match arity");
  std::size_t idx = 0;
  for (int i = d_ - 1; i >= 0; --i) {
    if (tuple[i] < 0 || tuple[i] >= n_) throw ValidationError("tuple entry is not a state");
    idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(tuple[i]);
  }
  return idx;
}

std::vector<StateId> TupleSpace::decode(std::size_t index) const {
  std::vector<StateId> t(d_);
  for (int i = 0; i < d_; ++i) {
    t[i] = static_cast<StateId>(index % static_cast<std::size_t>(n_));
    index /= static_cast<std::size_t>(n_);
  }
  return t;
}

}  // namespace phfl
