fn main() {
    std::process::exit(compsemi::cli::run(std::env::args_os()));
}
