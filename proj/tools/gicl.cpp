#include "gicl/cli.hpp"

int main(int argc, char** argv) { return gicl::cli::run(argc, argv); }
