fn main() {
    std::process::exit(anneal::cli::run(std::env::args_os()));
}
