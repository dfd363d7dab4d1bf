fn main() {
    std::process::exit(oligorep::cli::run(std::env::args_os()));
}
