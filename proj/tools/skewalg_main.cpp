#include "cli.hpp"

int main(int argc, char** argv) { return skewalg::run_cli(argc, argv); }
