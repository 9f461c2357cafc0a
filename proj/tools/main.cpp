#include "cli.hpp"

int main(int argc, char** argv) { return mipscrypt::cli::run_cli(argc, argv); }
