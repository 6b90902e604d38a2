#include "latitude/cli.hpp"

int main(int argc, char** argv) { return latitude::cli_main(argc, argv); }
