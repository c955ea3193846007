#include "segal_quant/cli.hpp"

int main(int argc, char** argv)
{
    return segal::cli::run(argc, argv);
}
