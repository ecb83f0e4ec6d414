fn main() {
    std::process::exit(cubepack::cli::run(std::env::args_os()));
}
