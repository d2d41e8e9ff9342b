#include "cli.hpp"

int main(int argc, char** argv) { return kpx::cli::run(argc, argv); }
