fn main() {
    std::process::exit(entropic_lg::cli::main_with_args(std::env::args_os()));
}
