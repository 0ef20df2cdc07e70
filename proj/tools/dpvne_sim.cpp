#include "dpvne/cli.hpp"

int main(int argc, char** argv) { return dpvne::cli_main(argc, argv); }
