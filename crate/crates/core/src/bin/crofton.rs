fn main() {
    std::process::exit(crofton::cli::run(std::env::args_os()));
}
