fn main() {
    std::process::exit(saunf::cli::run());
}
