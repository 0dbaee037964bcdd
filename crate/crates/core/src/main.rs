fn main() {
    std::process::exit(leavitt::cli::main_with_args(std::env::args_os()));
}
