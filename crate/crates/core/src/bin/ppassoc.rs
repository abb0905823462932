fn main() {
    std::process::exit(ppassoc::cli::run(std::env::args_os()));
}
