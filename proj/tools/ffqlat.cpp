// Placeholder main while the library is built out; replaced by the real CLI.
int main() { return 0; }
