fn main() {
    std::process::exit(quadtower::cli::main_with_args(std::env::args_os()));
}
