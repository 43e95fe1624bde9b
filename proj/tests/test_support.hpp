#pragma once

#include <gtest/gtest.h>

#include <initializer_list>
#include <string>
#include <vector>

#include "stackdel/rational.hpp"

namespace stackdel::testing {

inline Rational R(const char* text) { return parse_rational(text); }

inline std::vector<Rational> Rs(std::initializer_list<const char*> texts) {
  std::vector<Rational> out;
  for (const char* t : texts) out.push_back(parse_rational(t));
  return out;
}

/// Runs `body` and checks that it throws ModelError with `code`.
template <class Body>
void expect_error(ErrorCode code, Body&& body) {
  try {
    body();
    ADD_FAILURE() << "expected " << to_string(code) << ", nothing thrown";
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace stackdel::testing
