fn main() {
    std::process::exit(sidonlab::cli::run(std::env::args_os()));
}
