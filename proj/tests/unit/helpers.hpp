#pragma once

#include <vector>

#include "doctest.h"
#include "orlicz/bodies.hpp"
#include "orlicz/errors.hpp"

namespace testing_util {

inline orlicz::Vec v2(double x, double y) {
  orlicz::Vec v(2);
  v << x, y;
  return v;
}

inline orlicz::Vec v3(double x, double y, double z) {
  orlicz::Vec v(3);
  v << x, y, z;
  return v;
}

inline orlicz::ConvexBody square(double s = 1.0) {
  return orlicz::ConvexBody::vpolytope({v2(s, s), v2(-s, s), v2(-s, -s), v2(s, -s)});
}

inline orlicz::ConvexBody cube() {
  std::vector<orlicz::Vec> v;
  for (int a : {-1, 1})
    for (int b : {-1, 1})
      for (int c : {-1, 1}) v.push_back(v3(a, b, c));
  return orlicz::ConvexBody::vpolytope(v);
}

inline orlicz::Mat diag2(double a, double b) {
  orlicz::Mat m = orlicz::Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

template <class Fn>
orlicz::ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const orlicz::Error& e) {
    return e.code();
  }
  FAIL("expected an orlicz::Error");
  return orlicz::ErrorCode::ParseError;
}

}  // namespace testing_util
