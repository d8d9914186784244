fn main() {
    std::process::exit(haar_toolkit::cli::run_main());
}
