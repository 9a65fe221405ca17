fn main() {
    std::process::exit(biphoton_cli::run());
}
