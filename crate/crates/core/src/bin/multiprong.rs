fn main() {
    std::process::exit(multiprong::cli::run(std::env::args_os()));
}
