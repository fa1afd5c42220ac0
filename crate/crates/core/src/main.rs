fn main() {
    std::process::exit(syminv::cli::run(std::env::args_os()));
}
