#include "cli.hpp"

int main(int argc, char** argv) { return mlab::cli::main_entry(argc, argv); }
