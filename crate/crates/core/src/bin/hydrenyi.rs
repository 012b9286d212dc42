fn main() {
    std::process::exit(hydrenyi::cli::run(std::env::args_os()));
}
