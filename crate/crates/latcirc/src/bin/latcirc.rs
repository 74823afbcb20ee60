fn main() {
    std::process::exit(latcirc::cli::run_main());
}
