fn main() {
    std::process::exit(scgl::cli::run_from_args(std::env::args_os()));
}
