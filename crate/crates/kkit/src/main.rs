fn main() {
    std::process::exit(kkit::cli::run());
}
