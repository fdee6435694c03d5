#include "conformal/cli.hpp"

int main(int argc, char** argv) {
    return conformal::run_cli(argc, argv);
}
