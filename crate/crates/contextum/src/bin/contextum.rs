fn main() {
    std::process::exit(contextum::cli::run(std::env::args_os()));
}
