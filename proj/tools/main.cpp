#include "cli_dispatch.hpp"

int main(int argc, char** argv) { return biclique::cli::dispatch(argc, argv); }
