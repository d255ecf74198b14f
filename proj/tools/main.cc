#include "cli.h"

int main(int argc, char** argv) { return best::tools::RunCli(argc, argv); }
