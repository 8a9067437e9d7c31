#include <string>
#include <vector>

#include "qbsc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return qbsc::dispatch(args);
}
