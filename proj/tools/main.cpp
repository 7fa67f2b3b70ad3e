#include "cli.hpp"

int main(int argc, char** argv) { return pano::cli::run(argc, argv); }
