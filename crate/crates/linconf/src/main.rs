fn main() {
    std::process::exit(linconf::cli::run_main());
}
