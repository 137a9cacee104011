#include "sortenv/cli.hpp"

int main(int argc, char** argv) { return sortenv::cli_main(argc, argv); }
