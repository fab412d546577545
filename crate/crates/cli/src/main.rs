fn main() {
    std::process::exit(srgg_cli::main_with_args());
}
