#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace dtnsim {

struct NodePair {
  std::uint32_t a;  // a < b
  std::uint32_t b;

  friend bool operator==(const NodePair&, const NodePair&) = default;
  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

/// Contact detection back ends. All produce the same pair list: every
/// (i, j), i < j, with (xj - xi)^2 + (yj - yi)^2 <= min(ri, rj)^2, sorted.
enum class ContactKernel {
  automatic,  // avx2 when the CPU supports it, else scalar
  scalar,
  avx2,
  grid,  // uniform spatial hash, scalar predicate
};

ContactKernel parse_contact_kernel(std::string_view name);
std::string_view to_string(ContactKernel kernel);

bool cpu_has_avx2();

/// Resolves `automatic` to the concrete kernel for this machine.
ContactKernel resolve(ContactKernel kernel);

/// Node positions and ranges in structure-of-arrays form.
struct ContactInput {
  std::span<const double> x;
  std::span<const double> y;
  std::span<const double> range;
};

void in_range_pairs(ContactKernel kernel, const ContactInput& in, std::vector<NodePair>& out);

namespace kernels {
void in_range_pairs_scalar(const ContactInput& in, std::vector<NodePair>& out);
/// Falls back to the scalar kernel when built without x86 support.
void in_range_pairs_avx2(const ContactInput& in, std::vector<NodePair>& out);
void in_range_pairs_grid(const ContactInput& in, std::vector<NodePair>& out);
}  // namespace kernels

}  // namespace dtnsim
