#include <cstdlib>
#include <string>

#include "qwalk/errors.hpp"
#include "qwalk/kernels.hpp"

namespace qwalk::kernels {
namespace {

const KernelTable& resolve() {
  const char* forced = std::getenv("QWALK_SIMD");
  const std::string choice = forced ? forced : "";
  if (choice == "scalar") return scalar_table();
  const KernelTable* simd = avx2_table();
  if (choice == "avx2") {
    if (!simd) throw InputError("QWALK_SIMD=avx2 but AVX2/FMA is unavailable");
    return *simd;
  }
  if (!choice.empty() && choice != "auto")
    throw InputError("QWALK_SIMD must be one of auto, scalar, avx2; got '" +
                     choice + "'");
  return simd ? *simd : scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = resolve();
  return table;
}

}  // namespace qwalk::kernels
