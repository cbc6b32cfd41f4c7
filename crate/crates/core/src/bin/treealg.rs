fn main() {
    std::process::exit(treealg::cli::run(std::env::args_os()));
}
