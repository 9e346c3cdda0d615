// CLI entry point; subcommands are wired up once the library lands.
int main() { return 2; }
