fn main() {
    std::process::exit(asymrate::cli::main_with_args(std::env::args().collect()));
}
