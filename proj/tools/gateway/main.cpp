#include "cli.hpp"

int main(int argc, char** argv) { return rba::gateway::cli_main(argc, argv); }
