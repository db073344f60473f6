#include "vcot/cli.hpp"

int main(int argc, char** argv) { return vcot::cli_main(argc, argv); }
