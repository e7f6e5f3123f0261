fn main() {
    std::process::exit(chowlab_cli::run(std::env::args_os()));
}
