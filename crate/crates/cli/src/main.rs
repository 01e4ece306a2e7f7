fn main() {
    std::process::exit(pbit_cli::main_entry());
}
