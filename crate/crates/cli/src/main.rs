fn main() {
    std::process::exit(ctqw_cli::run(std::env::args_os()));
}
