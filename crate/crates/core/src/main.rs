fn main() {
    std::process::exit(coxinv::cli::run());
}
