#include "cli.hpp"

int main(int argc, char** argv) { return smar::cli::run(argc, argv); }
