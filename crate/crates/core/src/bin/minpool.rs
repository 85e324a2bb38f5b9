fn main() {
    minpool::cli::init_threads();
    std::process::exit(minpool::cli::run(std::env::args_os()));
}
