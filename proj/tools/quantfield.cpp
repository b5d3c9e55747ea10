#include "quantfield/cli/run.hpp"

int main(int argc, char** argv) { return quantfield::cli::run(argc, argv); }
