fn main() {
    std::process::exit(hnstab::cli::run());
}
