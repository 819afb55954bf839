fn main() {
    std::process::exit(spinphase::cli::main_with_args(std::env::args_os()));
}
