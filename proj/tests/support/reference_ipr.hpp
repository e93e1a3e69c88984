#pragma once

// Step-by-step transcription of the bidirectional permutation path-relinking
// procedure with 1-based lists, kept deliberately naive so it can serve as a
// reference for the library implementation.
//
// Reading of the ambiguous branches:
//   * an aligned index (I_b[i] == I_g[i]) is dropped from RI and ends the scan;
//     the step commits if a candidate was already evaluated, otherwise the
//     next outer iteration starts without changing phase;
//   * a scan with no candidate in the customer phase moves RI to the driver
//     positions and restarts the outer counter (pathSize keeps counting);
//     the same situation in the driver phase ends the procedure.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace vrpod::testing {

struct ReferenceEvent {
  enum Kind { Evaluate, Commit, SkipAligned, SwitchToDrivers } kind;
  std::size_t index;  // 0-based position in the index lists
  std::size_t pos_a;
  std::size_t pos_b;
  double value;
};

struct ReferenceResult {
  std::vector<double> best_genes;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<ReferenceEvent> events;
};

inline ReferenceResult reference_ipr(std::vector<double> base, std::vector<double> guide, std::size_t c,
                                     double pct_p,
                                     const std::function<double(std::span<const double>)>& decoder) {
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = base.size();
  ReferenceResult out;
  out.best_genes = base;

  long path_size = static_cast<long>(std::ceil(static_cast<double>(n) * pct_p - 1e-9));
  if (path_size <= 0) return out;

  // 1-based lists; slot 0 unused.
  std::vector<std::size_t> RI;
  for (std::size_t i = 1; i <= c; ++i) RI.push_back(i);
  std::vector<std::size_t> Ib(n + 1), Ig(n + 1);
  for (std::size_t i = 1; i <= n; ++i) Ib[i] = Ig[i] = i;
  auto sort_range = [](std::vector<std::size_t>& I, const std::vector<double>& chr, std::size_t lo, std::size_t hi) {
    // Stable insertion sort on [lo, hi] by gene value.
    for (std::size_t a = lo + 1; a <= hi; ++a) {
      std::size_t b = a;
      while (b > lo && chr[I[b] - 1] < chr[I[b - 1] - 1]) {
        std::swap(I[b], I[b - 1]);
        --b;
      }
    }
  };
  if (c >= 1) sort_range(Ib, base, 1, c);
  if (n >= c + 1) sort_range(Ib, base, c + 1, n);
  if (c >= 1) sort_range(Ig, guide, 1, c);
  if (n >= c + 1) sort_range(Ig, guide, c + 1, n);

  bool drivers = false;
line8:
  for (std::size_t j = 1; j <= n; ++j) {
    std::size_t i_best = 0;  // 0 stands for -1
    double val_best = inf;
    bool aligned = false;
    for (std::size_t pos = 0; pos < RI.size(); ++pos) {
      const std::size_t i = RI[pos];
      if (Ib[i] == Ig[i]) {
        out.events.push_back({ReferenceEvent::SkipAligned, i - 1, Ib[i] - 1, Ig[i] - 1, inf});
        RI.erase(RI.begin() + static_cast<long>(pos));
        aligned = true;
        break;
      }
      std::swap(base[Ib[i] - 1], base[Ig[i] - 1]);
      const double value = decoder(base);
      std::swap(base[Ib[i] - 1], base[Ig[i] - 1]);
      out.events.push_back({ReferenceEvent::Evaluate, i - 1, Ib[i] - 1, Ig[i] - 1, value});
      if (value < val_best) {
        i_best = i;
        val_best = value;
      }
    }
    if (i_best == 0) {
      if (aligned) continue;
      if (drivers) break;
      RI.clear();
      for (std::size_t i = c + 1; i <= n; ++i) RI.push_back(i);
      drivers = true;
      out.events.push_back({ReferenceEvent::SwitchToDrivers, 0, 0, 0, inf});
      goto line8;
    }
    std::swap(base[Ib[i_best] - 1], base[Ig[i_best] - 1]);
    out.events.push_back({ReferenceEvent::Commit, i_best - 1, Ib[i_best] - 1, Ig[i_best] - 1, val_best});
    if (val_best < out.best_value) {
      out.best_genes = base;
      out.best_value = val_best;
    }
    RI.erase(std::find(RI.begin(), RI.end(), i_best));
    std::swap(base, guide);
    path_size -= 1;
    if (path_size == 0) break;
  }
  return out;
}

}  // namespace vrpod::testing
