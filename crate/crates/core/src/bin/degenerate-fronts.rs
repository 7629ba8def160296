fn main() {
    std::process::exit(degenerate_fronts::cli::main_with(std::env::args_os()));
}
