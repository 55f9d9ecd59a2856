#include "schrotbc/cli.hpp"

int main(int argc, char** argv) { return schrotbc::cli_main(argc, argv); }
