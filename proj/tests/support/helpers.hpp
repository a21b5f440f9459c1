#pragma once

#include "lcs/error.hpp"
#include "lcs/flowfield.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>

namespace testing {

namespace fs = std::filesystem;

#define CHECK_ERROR_KIND(expr, expected_kind)                              \
  do {                                                                     \
    bool thrown_ = false;                                                  \
    try {                                                                  \
      (void)(expr);                                                        \
    } catch (const lcs::Error& e_) {                                       \
      thrown_ = true;                                                      \
      CHECK_MESSAGE(e_.kind() == (expected_kind), "got " << lcs::to_string(e_.kind())); \
    }                                                                      \
    CHECK_MESSAGE(thrown_, "expected an lcs::Error");                      \
  } while (0)

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("lcskit-test-" + tag + "-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline lcs::FieldPtr<2> zero_field_2d(double half = 1.0) {
  return lcs::make_analytic<2>(lcs::Domain<2>(lcs::Vec2(-half, -half), lcs::Vec2(half, half)),
                               [](const lcs::Vec2&, double) { return lcs::Vec2::Zero().eval(); }, "zero");
}

inline lcs::FieldPtr<3> zero_field_3d(double half = 1.0) {
  return lcs::make_analytic<3>(lcs::Domain<3>(lcs::Vec3::Constant(-half), lcs::Vec3::Constant(half)),
                               [](const lcs::Vec3&, double) { return lcs::Vec3::Zero().eval(); }, "zero");
}

/// u = (alpha x1, -alpha x2) on [-1, 1]^2.
inline lcs::FieldPtr<2> linear_saddle(double alpha = 1.0, double half = 1.0) {
  return lcs::make_analytic<2>(lcs::Domain<2>(lcs::Vec2(-half, -half), lcs::Vec2(half, half)),
                               [alpha](const lcs::Vec2& x, double) { return lcs::Vec2(alpha * x[0], -alpha * x[1]); },
                               "saddle");
}

/// u = (-x2, x1).
inline lcs::FieldPtr<2> rigid_rotation(double half = 3.0) {
  return lcs::make_analytic<2>(lcs::Domain<2>(lcs::Vec2(-half, -half), lcs::Vec2(half, half)),
                               [](const lcs::Vec2& x, double) { return lcs::Vec2(-x[1], x[0]); }, "rotation");
}

template <int Dim>
lcs::FieldPtr<Dim> linear_field(const lcs::Mat<Dim>& M, double half) {
  return lcs::make_analytic<Dim>(lcs::Domain<Dim>(lcs::Vec<Dim>::Constant(-half), lcs::Vec<Dim>::Constant(half)),
                                 [M](const lcs::Vec<Dim>& x, double) { return (M * x).eval(); }, "linear");
}

}  // namespace testing
