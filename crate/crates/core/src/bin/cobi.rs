fn main() {
    std::process::exit(cobi::cli::run(std::env::args_os()));
}
