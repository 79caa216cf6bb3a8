fn main() {
    std::process::exit(kpz_tails::cli::run(std::env::args_os()));
}
