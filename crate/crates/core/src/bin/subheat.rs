fn main() {
    std::process::exit(subheat::cli::main_with_env());
}
