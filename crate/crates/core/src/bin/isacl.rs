fn main() {
    std::process::exit(isacl::cli::run_from_args(std::env::args_os()));
}
