fn main() {
    std::process::exit(qrf_core::cli::run_from(std::env::args_os()));
}
