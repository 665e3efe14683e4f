fn main() {
    std::process::exit(matroid_markets::cli::run());
}
