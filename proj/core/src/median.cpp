#include <algorithm>
#include <limits>
#include <vector>

#include "fundusmark/preprocess.hpp"

namespace fundusmark {

// Sliding median without per-pixel sorting. Every image column keeps its
// current vertical window segment sorted; the 2D window is the union of w
// such segments. A "cut" records, per segment, how many of its values sit
// below the running median. Sliding one pixel swaps one segment and
// re-balances the cut one element at a time, so cost follows how far the
// median moves rather than the window area.
GrayImage median_filter(const GrayImage& img, int window) {
  if (window < 2) throw InvalidArgument("median window must be at least 2");
  if (img.empty()) return img;

  const long rows = static_cast<long>(img.rows());
  const long cols = static_cast<long>(img.cols());
  const long w = window;
  const long before = (w + 1) / 2 - 1;
  const long after = w - 1 - before;
  const long n = w * w;
  const long below_target = (n % 2 == 0) ? n / 2 : (n + 1) / 2;  // elements under the cut
  const bool even = n % 2 == 0;

  auto clamp_row = [rows](long y) { return std::clamp(y, 0L, rows - 1); };
  auto clamp_col = [cols](long x) { return std::clamp(x, 0L, cols - 1); };

  std::vector<double> segments(static_cast<std::size_t>(cols * w));
  auto segment = [&](long x) { return segments.data() + clamp_col(x) * w; };
  for (long x = 0; x < cols; ++x) {
    double* s = segments.data() + x * w;
    for (long j = 0; j < w; ++j) s[j] = img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(clamp_row(j - before)));
    std::sort(s, s + w);
  }

  std::vector<const double*> slot(static_cast<std::size_t>(w));
  std::vector<long> cut(static_cast<std::size_t>(w));
  GrayImage out(img.rows(), img.cols());
  double pivot = 0.0;

  for (long y = 0; y < rows; ++y) {
    if (y > 0) {
      const long leaving_row = clamp_row(y - 1 - before);
      const long entering_row = clamp_row(y + after);
      for (long x = 0; x < cols; ++x) {
        double* s = segments.data() + x * w;
        const double old_v = img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(leaving_row));
        const double new_v = img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(entering_row));
        double* q = std::lower_bound(s, s + w, old_v);
        if (new_v >= old_v) {
          while (q + 1 < s + w && q[1] < new_v) {
            *q = q[1];
            ++q;
          }
        } else {
          while (q > s && q[-1] > new_v) {
            *q = q[-1];
            --q;
          }
        }
        *q = new_v;
      }
      pivot = out.at(0, static_cast<std::size_t>(y - 1));
    }

    long below = 0;
    for (long i = 0; i < w; ++i) {
      slot[static_cast<std::size_t>(i)] = segment(i - before);
      const double* s = slot[static_cast<std::size_t>(i)];
      cut[static_cast<std::size_t>(i)] = std::lower_bound(s, s + w, pivot) - s;
      below += cut[static_cast<std::size_t>(i)];
    }

    std::size_t head = 0;
    for (long x = 0; x < cols; ++x) {
      if (x > 0) {
        below -= cut[head];
        const double* s = segment(x + after);
        slot[head] = s;
        cut[head] = std::lower_bound(s, s + w, pivot) - s;
        below += cut[head];
        head = (head + 1) % static_cast<std::size_t>(w);
      }
      while (below > below_target) {
        std::size_t best = 0;
        double best_v = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < slot.size(); ++i) {
          if (cut[i] > 0 && slot[i][cut[i] - 1] >= best_v) {
            best_v = slot[i][cut[i] - 1];
            best = i;
          }
        }
        --cut[best];
        --below;
      }
      while (below < below_target) {
        std::size_t best = 0;
        double best_v = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < slot.size(); ++i) {
          if (cut[i] < w && slot[i][cut[i]] <= best_v) {
            best_v = slot[i][cut[i]];
            best = i;
          }
        }
        ++cut[best];
        ++below;
      }
      double lo = -std::numeric_limits<double>::infinity();
      double hi = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < slot.size(); ++i) {
        if (cut[i] > 0) lo = std::max(lo, slot[i][cut[i] - 1]);
        if (cut[i] < w) hi = std::min(hi, slot[i][cut[i]]);
      }
      pivot = lo;
      out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = even ? 0.5 * (lo + hi) : lo;
    }
  }
  return out;
}

}  // namespace fundusmark
