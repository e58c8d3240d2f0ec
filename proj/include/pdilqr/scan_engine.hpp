#pragma once

// Inclusive associative scan with a serial fold and a work-efficient
// two-phase tree (up-sweep / down-sweep). Tree stages run their combinations
// concurrently; the engine counts stages so callers can check the span.

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pdilqr/parallel.hpp"

namespace pdilqr {

enum class ScanDirection { forward, reverse };
enum class ScanMode { sequential, tree };

struct ScanPlan {
  ScanDirection direction = ScanDirection::forward;
  ScanMode mode = ScanMode::tree;
  int workers = 1;

  // Filled in by inclusive_scan.
  int depth = 0;       // sequential combination stages
  long combines = 0;   // total operator applications
};

/// ceil(log2(length)) for length >= 1.
inline int ceil_log2(long length) {
  int k = 0;
  while ((1L << k) < length) ++k;
  return k;
}

namespace detail {

template <typename E, typename Combine>
std::vector<E> forward_sequential(std::span<const E> elems, Combine& combine, ScanPlan& plan) {
  std::vector<E> out;
  out.reserve(elems.size());
  out.push_back(elems[0]);
  for (size_t j = 1; j < elems.size(); ++j) {
    out.push_back(combine(out.back(), elems[j]));
    ++plan.combines;
  }
  plan.depth = static_cast<int>(elems.size()) - 1;
  return out;
}

// Blelloch scan on 2^k slots. Padding slots hold the identity when one is
// given and are left empty otherwise; empty slots are skipped by the
// combination, which yields the irregular tree.
template <typename E, typename Combine>
std::vector<E> forward_tree(std::span<const E> elems, Combine& combine, ScanPlan& plan,
                            const std::optional<E>& identity) {
  using Slot = std::optional<E>;
  const long length = static_cast<long>(elems.size());
  const int levels = ceil_log2(length);
  const long padded = 1L << levels;

  std::vector<Slot> slots(padded, identity);
  for (long j = 0; j < length; ++j) slots[j] = elems[j];

  std::vector<char> did_combine(padded / 2 + 1, 0);
  auto join = [&](const Slot& a, const Slot& b, long tag) -> Slot {
    if (!a) return b;
    if (!b) return a;
    did_combine[tag] = 1;
    return combine(*a, *b);
  };
  auto count_stage = [&](long pairs) {
    for (long i = 0; i < pairs; ++i) {
      plan.combines += did_combine[i];
      did_combine[i] = 0;
    }
    ++plan.depth;
  };

  for (int d = 0; d < levels; ++d) {
    const long stride = 2L << d;
    const long pairs = padded / stride;
    parallel_for(pairs, plan.workers, [&](long i) {
      const long right = i * stride + stride - 1;
      const long left = right - stride / 2;
      slots[right] = join(slots[left], slots[right], i);
    });
    count_stage(pairs);
  }

  Slot total = slots[padded - 1];
  slots[padded - 1] = identity;

  for (int d = levels - 1; d >= 0; --d) {
    const long stride = 2L << d;
    const long pairs = padded / stride;
    parallel_for(pairs, plan.workers, [&](long i) {
      const long right = i * stride + stride - 1;
      const long left = right - stride / 2;
      Slot left_sum = std::move(slots[left]);
      slots[left] = slots[right];
      slots[right] = join(slots[right], left_sum, i);
    });
    count_stage(pairs);
  }

  // slots now hold the exclusive scan; shift by one for the inclusive one.
  std::vector<E> out;
  out.reserve(length);
  for (long j = 0; j + 1 < length; ++j) out.push_back(std::move(*slots[j + 1]));
  out.push_back(std::move(*total));
  return out;
}

}  // namespace detail

/// forward: out_j = e_0 * ... * e_j.  reverse: out_j = e_j * ... * e_{L-1}.
/// `combine(a, b)` must be associative and free of shared mutable state.
template <typename E, typename Combine>
std::vector<E> inclusive_scan(std::span<const E> elems, Combine combine, ScanPlan& plan,
                              const std::optional<E>& identity = std::nullopt) {
  if (elems.empty()) throw std::invalid_argument("inclusive_scan: empty input");
  plan.depth = 0;
  plan.combines = 0;

  if (plan.direction == ScanDirection::forward) {
    if (plan.mode == ScanMode::sequential) return detail::forward_sequential(elems, combine, plan);
    return detail::forward_tree(elems, combine, plan, identity);
  }

  // Reverse scan = forward scan of the reversed sequence with swapped arguments.
  std::vector<E> reversed(elems.rbegin(), elems.rend());
  auto swapped = [&combine](const E& a, const E& b) { return combine(b, a); };
  std::vector<E> out = plan.mode == ScanMode::sequential
                           ? detail::forward_sequential(std::span<const E>(reversed), swapped, plan)
                           : detail::forward_tree(std::span<const E>(reversed), swapped, plan, identity);
  std::reverse(out.begin(), out.end());
  return out;
}

template <typename E, typename Combine>
std::vector<E> inclusive_scan(const std::vector<E>& elems, Combine combine, ScanPlan& plan,
                              const std::optional<E>& identity = std::nullopt) {
  return inclusive_scan(std::span<const E>(elems), std::move(combine), plan, identity);
}

}  // namespace pdilqr
