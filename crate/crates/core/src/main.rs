fn main() {
    std::process::exit(cdh::cli::main_with_args(std::env::args_os()));
}
