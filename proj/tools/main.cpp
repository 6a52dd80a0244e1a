#include "cli.hpp"

int main(int argc, char** argv) { return ngkde_cli::run(argc, argv); }
