#include "dtnsim/contact_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#if defined(__x86_64__) || defined(__i386__)
#define DTNSIM_X86 1
#include <immintrin.h>
#endif

namespace dtnsim {

ContactKernel parse_contact_kernel(std::string_view name) {
  if (name == "auto") return ContactKernel::automatic;
  if (name == "scalar") return ContactKernel::scalar;
  if (name == "avx2") return ContactKernel::avx2;
  if (name == "grid") return ContactKernel::grid;
  throw std::invalid_argument("unknown contact kernel '" + std::string(name) + "'");
}

std::string_view to_string(ContactKernel kernel) {
  switch (kernel) {
    case ContactKernel::automatic: return "auto";
    case ContactKernel::scalar: return "scalar";
    case ContactKernel::avx2: return "avx2";
    case ContactKernel::grid: return "grid";
  }
  return "auto";
}

bool cpu_has_avx2() {
#ifdef DTNSIM_X86
  static const bool has = __builtin_cpu_supports("avx2");
  return has;
#else
  return false;
#endif
}

ContactKernel resolve(ContactKernel kernel) {
  if (kernel == ContactKernel::automatic) {
    return cpu_has_avx2() ? ContactKernel::avx2 : ContactKernel::scalar;
  }
  return kernel;
}

namespace {

inline bool in_range(const ContactInput& in, std::size_t i, std::size_t j) {
  const double dx = in.x[j] - in.x[i];
  const double dy = in.y[j] - in.y[i];
  const double r = std::min(in.range[i], in.range[j]);
  return dx * dx + dy * dy <= r * r;
}

}  // namespace

namespace kernels {

void in_range_pairs_scalar(const ContactInput& in, std::vector<NodePair>& out) {
  out.clear();
  const std::size_t n = in.x.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (in_range(in, i, j)) out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
  }
}

#ifdef DTNSIM_X86
__attribute__((target("avx2"))) void in_range_pairs_avx2(const ContactInput& in,
                                                          std::vector<NodePair>& out) {
  out.clear();
  const std::size_t n = in.x.size();
  const double* xs = in.x.data();
  const double* ys = in.y.data();
  const double* rs = in.range.data();
  for (std::size_t i = 0; i < n; ++i) {
    const __m256d xi = _mm256_set1_pd(xs[i]);
    const __m256d yi = _mm256_set1_pd(ys[i]);
    const __m256d ri = _mm256_set1_pd(rs[i]);
    std::size_t j = i + 1;
    for (; j + 4 <= n; j += 4) {
      const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + j), xi);
      const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + j), yi);
      // Operands ordered as std::min(ri, rj): returns ri unless rj < ri.
      const __m256d r = _mm256_min_pd(_mm256_loadu_pd(rs + j), ri);
      const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      int mask = _mm256_movemask_pd(_mm256_cmp_pd(d2, _mm256_mul_pd(r, r), _CMP_LE_OQ));
      while (mask != 0) {
        const int lane = __builtin_ctz(static_cast<unsigned>(mask));
        out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j + lane)});
        mask &= mask - 1;
      }
    }
    for (; j < n; ++j) {
      if (in_range(in, i, j)) out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
  }
}
#else
void in_range_pairs_avx2(const ContactInput& in, std::vector<NodePair>& out) {
  in_range_pairs_scalar(in, out);
}
#endif

void in_range_pairs_grid(const ContactInput& in, std::vector<NodePair>& out) {
  out.clear();
  const std::size_t n = in.x.size();
  if (n < 2) return;
  double cell = 0.0;
  for (double r : in.range) cell = std::max(cell, r);
  if (!(cell > 0.0)) {
    in_range_pairs_scalar(in, out);
    return;
  }

  auto key = [](std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint32_t>(cy);
  };
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells;
  cells.reserve(n);
  std::vector<std::int64_t> cx(n), cy(n);
  for (std::size_t i = 0; i < n; ++i) {
    cx[i] = static_cast<std::int64_t>(std::floor(in.x[i] / cell));
    cy[i] = static_cast<std::int64_t>(std::floor(in.y[i] / cell));
    cells[key(cx[i], cy[i])].push_back(static_cast<std::uint32_t>(i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::int64_t ox = -1; ox <= 1; ++ox) {
      for (std::int64_t oy = -1; oy <= 1; ++oy) {
        auto it = cells.find(key(cx[i] + ox, cy[i] + oy));
        if (it == cells.end()) continue;
        for (std::uint32_t j : it->second) {
          if (j > i && in_range(in, i, j)) out.push_back({static_cast<std::uint32_t>(i), j});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
}

}  // namespace kernels

void in_range_pairs(ContactKernel kernel, const ContactInput& in, std::vector<NodePair>& out) {
  switch (resolve(kernel)) {
    case ContactKernel::avx2:
      if (cpu_has_avx2()) {
        kernels::in_range_pairs_avx2(in, out);
        return;
      }
      [[fallthrough]];
    case ContactKernel::scalar:
    case ContactKernel::automatic:
      kernels::in_range_pairs_scalar(in, out);
      return;
    case ContactKernel::grid:
      kernels::in_range_pairs_grid(in, out);
      return;
  }
}

}  // namespace dtnsim
