#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace egosim::cli {

// Entry point shared by the binary and the tests. Returns the process exit
// code: 0 success, 2 input/configuration error, 3 computation error,
// 1 unexpected failure.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

}  // namespace egosim::cli
