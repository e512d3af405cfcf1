#include <iostream>

int main() {
  std::cout << "hcr: command-line interface under construction\n";
  return 0;
}
