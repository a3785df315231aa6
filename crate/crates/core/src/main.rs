fn main() {
    std::process::exit(zetaflow::cli::main_entry());
}
