fn main() {
    std::process::exit(polyglue::cli::main_with_args(std::env::args_os()));
}
