fn main() {
    std::process::exit(cyclic_covers::cli::run(std::env::args_os()));
}
