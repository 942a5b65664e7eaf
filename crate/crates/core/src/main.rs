fn main() {
    std::process::exit(clone_forge::cli::main());
}
