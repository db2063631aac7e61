#include "dislo/cli.hpp"

int main(int argc, char** argv) { return dislo::dispatch(argc, argv); }
