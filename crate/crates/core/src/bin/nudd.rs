fn main() {
    std::process::exit(nested_udd::cli::main_with(std::env::args_os()));
}
