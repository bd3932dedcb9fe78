fn main() {
    std::process::exit(newton_planes::cli::main_with_args(std::env::args_os()));
}
