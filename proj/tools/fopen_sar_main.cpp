// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fopen-sar Authors

#include "fopen_sar/cli.hpp"

int main(int argc, char** argv) { return fsar::cli::run_cli(argc, argv); }
