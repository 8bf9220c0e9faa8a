#pragma once

#include <string>

#include "doctest.h"
#include "finsheaf/error.hpp"

// Runs f and checks it throws finsheaf::Error with the given code; returns
// the witness.
template <class F>
std::string error_witness(finsheaf::ErrorCode code, F&& f) {
  try {
    f();
  } catch (const finsheaf::Error& e) {
    CHECK_MESSAGE(e.code() == code, "got " << e.what());
    return e.witness();
  }
  FAIL("no error thrown, expected " << finsheaf::to_string(code));
  return {};
}
