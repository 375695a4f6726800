fn main() {
    std::process::exit(ybhom::cli::main_with_args(std::env::args_os()));
}
