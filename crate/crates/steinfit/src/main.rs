fn main() {
    std::process::exit(steinfit::cli::run(std::env::args_os()));
}
