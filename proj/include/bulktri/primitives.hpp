#pragma once

// Data-parallel sequence primitives: sort, merge, concat, map, combine, scan,
// extract, scan-with-resets, pack and the two multisearch variants.
//
// Every primitive is a pure function of its inputs. When the Executor is
// sequential (or the input is below one grain) a plain loop is used; the
// parallel path produces bit-identical output.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bulktri/parallel.hpp"

namespace bulktri::par {

// 1-based element index; 0 is the null index.
using Index = std::uint64_t;
inline constexpr Index null_index = 0;

inline constexpr std::size_t not_found = static_cast<std::size_t>(-1);

namespace detail {

// Number of elements of `a` among the first k outputs of a stable merge of
// a and b (ties taken from a first).
template <class T, class Cmp>
std::size_t merge_corank(std::size_t k, std::span<const T> a,
                         std::span<const T> b, Cmp& cmp) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  std::size_t lo = k > nb ? k - nb : 0;
  std::size_t hi = std::min(k, na);
  while (lo < hi) {
    const std::size_t i = lo + (hi - lo) / 2;
    const std::size_t j = k - i;
    if (j == 0 || i == na || cmp(b[j - 1], a[i]))
      hi = i;
    else
      lo = i + 1;
  }
  return lo;
}

template <class T, class Cmp>
void merge_into(const Executor& ex, std::span<const T> a, std::span<const T> b,
                T* out, Cmp& cmp) {
  const std::size_t n = a.size() + b.size();
  if (!ex.is_parallel(n)) {
    std::merge(a.begin(), a.end(), b.begin(), b.end(), out, cmp);
    return;
  }
  parallel_blocks(ex, n, [&](std::size_t lo, std::size_t hi) {
    const std::size_t ia = merge_corank(lo, a, b, cmp);
    const std::size_t ib = merge_corank(hi, a, b, cmp);
    std::merge(a.begin() + ia, a.begin() + ib, b.begin() + (lo - ia),
               b.begin() + (hi - ib), out + lo, cmp);
  });
}

}  // namespace detail

// Stable sort in place. Runs are sorted independently, then merged pairwise
// with merge-path partitioning.
template <class T, class Cmp>
void sort_in_place(const Executor& ex, std::vector<T>& v, Cmp cmp) {
  const std::size_t n = v.size();
  if (!ex.is_parallel(n)) {
    std::stable_sort(v.begin(), v.end(), cmp);
    return;
  }
  const std::size_t runs =
      std::min(ex.num_blocks(n), static_cast<std::size_t>(ex.workers) * 4);
  const std::size_t run_len = (n + runs - 1) / runs;
  parallel_tasks(ex, runs, [&](std::size_t r) {
    const std::size_t lo = std::min(n, r * run_len);
    const std::size_t hi = std::min(n, lo + run_len);
    std::stable_sort(v.begin() + lo, v.begin() + hi, cmp);
  });

  std::vector<T> buf(n);
  std::vector<T>* src = &v;
  std::vector<T>* dst = &buf;
  for (std::size_t width = run_len; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(n, lo + width);
      const std::size_t hi = std::min(n, lo + 2 * width);
      std::span<const T> a(src->data() + lo, mid - lo);
      std::span<const T> b(src->data() + mid, hi - mid);
      detail::merge_into(ex, a, b, dst->data() + lo, cmp);
    }
    std::swap(src, dst);
  }
  if (src != &v) v = std::move(*src);
}

template <class T, class Cmp = std::less<T>>
std::vector<T> sort(const Executor& ex, std::span<const T> a, Cmp cmp = {}) {
  std::vector<T> out(a.begin(), a.end());
  sort_in_place(ex, out, cmp);
  return out;
}

template <class T, class Cmp = std::less<T>>
std::vector<T> merge(const Executor& ex, std::span<const T> a,
                     std::span<const T> b, Cmp cmp = {}) {
  std::vector<T> out(a.size() + b.size());
  detail::merge_into(ex, a, b, out.data(), cmp);
  return out;
}

template <class T>
std::vector<T> concat(const Executor& ex, std::span<const T> a,
                      std::span<const T> b) {
  std::vector<T> out(a.size() + b.size());
  parallel_blocks(ex, out.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      out[i] = i < a.size() ? a[i] : b[i - a.size()];
  });
  return out;
}

template <class T, class F>
auto map(const Executor& ex, std::span<const T> a, F f) {
  using U = std::decay_t<std::invoke_result_t<F&, const T&>>;
  std::vector<U> out(a.size());
  parallel_for(ex, a.size(), [&](std::size_t i) { out[i] = f(a[i]); });
  return out;
}

template <class T, class U, class F>
auto combine(const Executor& ex, std::span<const T> a, std::span<const U> b,
             F f) {
  using V = std::decay_t<std::invoke_result_t<F&, const T&, const U&>>;
  if (a.size() != b.size())
    throw std::invalid_argument("combine: length mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  std::vector<V> out(a.size());
  parallel_for(ex, a.size(), [&](std::size_t i) { out[i] = f(a[i], b[i]); });
  return out;
}

// Exclusive prefix: out[i] = id (+) a[0] (+) ... (+) a[i-1].
// `op` must be associative and `id` a left identity of it.
template <class T, class Op>
std::vector<T> scan(const Executor& ex, std::span<const T> a, Op op, T id) {
  const std::size_t n = a.size();
  std::vector<T> out(n);
  if (!ex.is_parallel(n)) {
    T acc = id;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = acc;
      acc = op(acc, a[i]);
    }
    return out;
  }
  const std::size_t blocks = ex.num_blocks(n);
  const std::size_t grain = ex.grain;
  std::vector<T> sums(blocks);
  parallel_tasks(ex, blocks, [&](std::size_t b) {
    const std::size_t lo = b * grain;
    const std::size_t hi = std::min(n, lo + grain);
    T acc = a[lo];
    for (std::size_t i = lo + 1; i < hi; ++i) acc = op(acc, a[i]);
    sums[b] = acc;
  });
  std::vector<T> offsets(blocks);
  T acc = id;
  for (std::size_t b = 0; b < blocks; ++b) {
    offsets[b] = acc;
    acc = op(acc, sums[b]);
  }
  parallel_tasks(ex, blocks, [&](std::size_t b) {
    const std::size_t lo = b * grain;
    const std::size_t hi = std::min(n, lo + grain);
    T run = offsets[b];
    for (std::size_t i = lo; i < hi; ++i) {
      out[i] = run;
      run = op(run, a[i]);
    }
  });
  return out;
}

// out[i] = a[b[i]] for non-null 1-based b[i], nullopt otherwise.
template <class T>
std::vector<std::optional<T>> extract(const Executor& ex, std::span<const T> a,
                                      std::span<const Index> b) {
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] > a.size())
      throw std::out_of_range("extract: index " + std::to_string(b[i]) +
                              " at position " + std::to_string(i + 1) +
                              " exceeds length " + std::to_string(a.size()));
  }
  std::vector<std::optional<T>> out(b.size());
  parallel_for(ex, b.size(), [&](std::size_t i) {
    if (b[i] != null_index) out[i] = a[b[i] - 1];
  });
  return out;
}

enum class Tick : std::uint8_t { one, reset };

namespace detail {

// Composable form of "sum += 1" / "sum = 0": apply(s) = reset ? value : s + value.
struct ResetSegment {
  bool reset = false;
  std::uint64_t value = 0;
};

inline ResetSegment compose(const ResetSegment& x, const ResetSegment& y) {
  if (y.reset) return y;
  return ResetSegment{x.reset, x.value + y.value};
}

}  // namespace detail

// Running counter that increments on `one` and returns to 0 after `reset`;
// out[i] is the counter value just before position i.
inline std::vector<std::uint64_t> scan_with_resets(const Executor& ex,
                                                   std::span<const Tick> a) {
  const auto segs = map(ex, a, [](Tick t) {
    return t == Tick::reset ? detail::ResetSegment{true, 0}
                            : detail::ResetSegment{false, 1};
  });
  const auto pre = scan(ex, std::span<const detail::ResetSegment>(segs),
                        detail::compose, detail::ResetSegment{});
  return map(ex, std::span<const detail::ResetSegment>(pre),
             [](const detail::ResetSegment& s) { return s.value; });
}

// Ascending positions i in [0, n) with pred(i) true.
template <class Pred>
std::vector<std::size_t> pack_index(const Executor& ex, std::size_t n,
                                    Pred pred) {
  if (!ex.is_parallel(n)) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
      if (pred(i)) out.push_back(i);
    return out;
  }
  std::vector<std::uint8_t> flags(n);
  const std::size_t blocks = ex.num_blocks(n);
  const std::size_t grain = ex.grain;
  std::vector<std::size_t> counts(blocks);
  parallel_tasks(ex, blocks, [&](std::size_t b) {
    const std::size_t lo = b * grain;
    const std::size_t hi = std::min(n, lo + grain);
    std::size_t c = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      flags[i] = pred(i) ? 1 : 0;
      c += flags[i];
    }
    counts[b] = c;
  });
  const auto offsets =
      scan(Executor::sequential(), std::span<const std::size_t>(counts),
           std::plus<>{}, std::size_t{0});
  std::vector<std::size_t> out(blocks ? offsets.back() + counts.back() : 0);
  parallel_tasks(ex, blocks, [&](std::size_t b) {
    const std::size_t lo = b * grain;
    const std::size_t hi = std::min(n, lo + grain);
    std::size_t w = offsets[b];
    for (std::size_t i = lo; i < hi; ++i)
      if (flags[i]) out[w++] = i;
  });
  return out;
}

namespace detail {

template <class K>
struct TaggedQuery {
  K key;
  std::size_t index;
};

// For every query key, the position of the last key in `keys` that is not
// greater than it (not_found if none). `keys` must be non-decreasing.
template <class K, class Less>
std::vector<std::size_t> pred_eq_positions(const Executor& ex,
                                           std::span<const K> keys,
                                           std::span<const K> queries,
                                           Less less, bool queries_sorted) {
  const std::size_t m = queries.size();
  const std::size_t n = keys.size();
  std::vector<std::size_t> result(m, not_found);
  if (m == 0 || n == 0) return result;

  if (!queries_sorted) {
    // Independent binary searches: O(m log n) with no sort of the queries.
    parallel_for(ex, m, [&](std::size_t i) {
      const auto it = std::upper_bound(keys.begin(), keys.end(), queries[i], less);
      const std::size_t j = static_cast<std::size_t>(it - keys.begin());
      result[i] = j == 0 ? not_found : j - 1;
    });
    return result;
  }
  std::vector<TaggedQuery<K>> sorted(m);
  parallel_for(ex, m, [&](std::size_t i) { sorted[i] = {queries[i], i}; });

  // Merge-style sweep per block of sorted queries; galloping keeps sparse
  // query sets from paying for the full key range.
  parallel_blocks(ex, m, [&](std::size_t lo, std::size_t hi) {
    auto upper = [&](std::size_t from, const K& q) {
      std::size_t step = 1;
      std::size_t bound = from;
      while (bound < n && !less(q, keys[bound])) {
        from = bound + 1;
        bound = from + step;
        step *= 2;
      }
      bound = std::min(bound, n);
      return static_cast<std::size_t>(
          std::upper_bound(keys.begin() + from, keys.begin() + bound, q,
                           less) -
          keys.begin());
    };
    std::size_t j = static_cast<std::size_t>(
        std::upper_bound(keys.begin(), keys.end(), sorted[lo].key, less) -
        keys.begin());
    for (std::size_t i = lo; i < hi; ++i) {
      j = upper(j, sorted[i].key);
      result[sorted[i].index] = j == 0 ? not_found : j - 1;
    }
  });
  return result;
}

}  // namespace detail

// Position of the largest key <= each query, or not_found.
template <class K, class Less = std::less<K>>
std::vector<std::size_t> pred_eq_search(const Executor& ex,
                                        std::span<const K> sorted_keys,
                                        std::span<const K> queries,
                                        Less less = {},
                                        bool queries_sorted = false) {
  return detail::pred_eq_positions(ex, sorted_keys, queries, less,
                                   queries_sorted);
}

// Position of the key equal to each query, or not_found. Keys must be
// distinct.
template <class K, class Less = std::less<K>>
std::vector<std::size_t> exact_search(const Executor& ex,
                                      std::span<const K> sorted_keys,
                                      std::span<const K> queries,
                                      Less less = {},
                                      bool queries_sorted = false) {
  auto pos = detail::pred_eq_positions(ex, sorted_keys, queries, less,
                                       queries_sorted);
  parallel_for(ex, pos.size(), [&](std::size_t i) {
    if (pos[i] != not_found && less(sorted_keys[pos[i]], queries[i]))
      pos[i] = not_found;
  });
  return pos;
}

template <class K, class V>
struct KeyValueSeq {
  std::vector<std::pair<K, V>> items;
  bool sorted = false;
};

namespace detail {

template <class K, class V>
std::vector<std::pair<K, V>> sorted_items(const Executor& ex,
                                          const KeyValueSeq<K, V>& s) {
  std::vector<std::pair<K, V>> items = s.items;
  if (!s.sorted)
    sort_in_place(ex, items, [](const auto& x, const auto& y) {
      return x.first < y.first;
    });
  return items;
}

template <class K, class V>
std::vector<std::optional<std::pair<K, V>>> gather_hits(
    const Executor& ex, const std::vector<std::pair<K, V>>& items,
    const std::vector<std::size_t>& pos) {
  std::vector<std::optional<std::pair<K, V>>> out(pos.size());
  parallel_for(ex, pos.size(), [&](std::size_t i) {
    if (pos[i] != not_found) out[i] = items[pos[i]];
  });
  return out;
}

}  // namespace detail

template <class K, class V>
std::vector<std::optional<std::pair<K, V>>> exact_multisearch(
    const Executor& ex, const KeyValueSeq<K, V>& s, std::span<const K> t) {
  const auto items = detail::sorted_items(ex, s);
  const auto keys = map(ex, std::span<const std::pair<K, V>>(items),
                        [](const auto& kv) { return kv.first; });
  const auto pos = exact_search(ex, std::span<const K>(keys), t);
  return detail::gather_hits(ex, items, pos);
}

template <class K, class V>
std::vector<std::optional<std::pair<K, V>>> pred_eq_multisearch(
    const Executor& ex, const KeyValueSeq<K, V>& s, std::span<const K> t) {
  const auto items = detail::sorted_items(ex, s);
  const auto keys = map(ex, std::span<const std::pair<K, V>>(items),
                        [](const auto& kv) { return kv.first; });
  const auto pos = pred_eq_search(ex, std::span<const K>(keys), t);
  return detail::gather_hits(ex, items, pos);
}

}  // namespace bulktri::par
