fn main() {
    std::process::exit(cipc_core::cli::run(std::env::args_os()));
}
