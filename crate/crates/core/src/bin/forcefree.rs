fn main() {
    std::process::exit(forcefree::cli::main_with_args(std::env::args_os()));
}
