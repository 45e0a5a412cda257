#include "wpt/cli.hpp"

int main(int argc, char** argv) { return wpt::cli::run(argc, argv); }
