fn main() {
    std::process::exit(singtrace::cli::run(std::env::args_os()));
}
