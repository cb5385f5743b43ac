#include "layered_elastica/cli.hpp"

int main(int argc, char** argv) { return le::cli::run(argc, argv); }
