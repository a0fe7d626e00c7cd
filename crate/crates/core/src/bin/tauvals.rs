fn main() {
    std::process::exit(tauvals::cli::run(std::env::args_os()));
}
