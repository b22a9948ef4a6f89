#include "ruqa/cli.hpp"

int main(int argc, char** argv) { return ruqa::cli::run(argc, argv); }
