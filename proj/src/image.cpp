#include "mvd/image.hpp"

namespace mvd {

void require_same_shape(const ManifoldImage& a, const ManifoldImage& b,
                        const char* what) {
  if (!a.same_shape(b))
    throw ManifoldMismatchError(std::string(what) +
                                ": images differ in grid or manifold");
}

}  // namespace mvd
