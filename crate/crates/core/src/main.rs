fn main() {
    std::process::exit(zeta3::cli::run(std::env::args()));
}
