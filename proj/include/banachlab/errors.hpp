#pragma once

#include <stdexcept>
#include <string>

// Error vocabulary for the whole library.  Everything derives from
// banachlab::error so callers can catch one type at the boundary.

namespace banachlab {

struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// construction / shape problems
struct invalid_spec : error {
  using error::error;
};
struct dimension_mismatch : error {
  using error::error;
};
struct index_out_of_range : error {
  using error::error;
};
struct component_mismatch : error {
  using error::error;
};

// duality / smoothness problems
struct zero_functional : error {
  using error::error;
};
struct non_smooth_point : error {
  using error::error;
};
struct non_unique_extension : error {
  using error::error;
};

// modulus problems
struct unsupported_space : error {
  using error::error;
};
struct empty_curve : error {
  using error::error;
};
struct not_uniformly_convex : error {
  using error::error;
};
struct not_uniformly_monotone : error {
  using error::error;
};
struct precondition_modulus : error {
  using error::error;
};
struct uniformity_violation : error {
  using error::error;
};

// numeric machinery
struct bisection_failure : error {
  using error::error;
};

// measures / operators
struct label_collision : error {
  using error::error;
};
struct empty_point_set : error {
  using error::error;
};

// perturbation engine
struct premise_violation : error {
  using error::error;
};
struct search_exhausted : error {
  using error::error;
};
struct bump_invalid : error {
  using error::error;
};

// cli / config
struct config_invalid : error {
  using error::error;
};

}  // namespace banachlab
