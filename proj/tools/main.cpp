#include <cstdio>

int main() {
    std::puts("fewmode: command-line interface not wired up yet");
    return 0;
}
