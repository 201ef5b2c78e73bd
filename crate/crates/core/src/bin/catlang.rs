fn main() {
    std::process::exit(catlang::cli::run(std::env::args_os()));
}
