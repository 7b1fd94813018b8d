#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace physarum {

inline constexpr std::uint64_t kDeterminantCap = 2'000'000;
inline constexpr std::uint64_t kEnumerationCap = 1'000'000;

// PHYSARUM_SIZE_CAP, when set to a positive integer, replaces every default cap.
std::uint64_t size_cap(std::uint64_t default_cap);

// Saturates at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);
std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b);

// Visits every k-subset of {0..n-1} in lexicographic order. Stops early when
// fn returns false.
void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<bool(const std::vector<std::size_t>&)>& fn);

}  // namespace physarum
