fn main() {
    std::process::exit(gamma0_dims::cli::run(std::env::args_os()));
}
