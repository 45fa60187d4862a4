fn main() {
    std::process::exit(harsanyi_cli::run(std::env::args_os()));
}
