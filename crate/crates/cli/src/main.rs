fn main() {
    std::process::exit(softscale_cli::main_with_env());
}
