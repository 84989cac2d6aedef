#include "egosim/commands.hpp"

int main(int argc, char** argv) { return egosim::cli::run(argc, argv); }
