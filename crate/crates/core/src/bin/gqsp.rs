fn main() {
    std::process::exit(gqsp::cli::run(std::env::args_os()));
}
