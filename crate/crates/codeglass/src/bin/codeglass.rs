fn main() {
    std::process::exit(codeglass::cli::main_with_args(std::env::args_os()));
}
