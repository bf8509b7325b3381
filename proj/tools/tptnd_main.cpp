// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "tptnd/cli.h"

int main(int argc, char** argv) {
  return tptnd::cli::main(argc, argv, std::cout, std::cerr);
}
