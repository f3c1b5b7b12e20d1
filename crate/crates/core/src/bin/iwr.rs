fn main() {
    std::process::exit(iwr::cli::run(std::env::args_os()));
}
