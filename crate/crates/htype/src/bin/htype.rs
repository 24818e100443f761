fn main() {
    std::process::exit(htype::cli::run());
}
