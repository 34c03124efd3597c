fn main() {
    std::process::exit(friedel_cli::run(std::env::args_os()));
}
