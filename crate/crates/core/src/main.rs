fn main() {
    std::process::exit(hece::cli::run(std::env::args_os()));
}
