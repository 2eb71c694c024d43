// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "corpusrefine/cli.hpp"

int main(int argc, char** argv) { return corpusrefine::cli::run(argc, argv, std::cout, std::cerr); }
