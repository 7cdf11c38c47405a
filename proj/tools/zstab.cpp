#include "cli_app.hpp"

int main(int argc, char** argv) { return zstab::cli::main(argc, argv); }
