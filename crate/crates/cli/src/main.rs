fn main() {
    std::process::exit(squeezed_cli::run(std::env::args_os()));
}
