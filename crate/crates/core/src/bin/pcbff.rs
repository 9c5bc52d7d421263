fn main() {
    std::process::exit(pcbff::cli::run());
}
