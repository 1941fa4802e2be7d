// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include "maxdd/backend.hpp"

int main(int argc, char **argv)
{
  maxdd::ensure_dense_backend(argv);
  ::testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}
