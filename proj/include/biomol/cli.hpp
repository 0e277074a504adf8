//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BIOMOL_CLI_HPP_
#define BIOMOL_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace biomol::cli {

// Runs one subcommand. args excludes the program name. Returns 0 on
// success, 1 on validation failure, 2 on usage error (grammar printed to
// err). Every subcommand is a thin shell over a library operation.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// Default location for bundled data files (BLOSUM matrix, motif
// dictionary): the IBM_DATA_DIR environment variable when set, otherwise
// the build-time data directory.
std::string data_dir();

}  // namespace biomol::cli

#endif  // BIOMOL_CLI_HPP_
