#include "thermopan/cli.hpp"

int main(int argc, char** argv) { return thermopan::cli::dispatch(argc, argv); }
