fn main() {
    std::process::exit(tunneltime::cli::run());
}
