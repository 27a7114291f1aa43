fn main() {
    std::process::exit(nhfock_cli::run(std::env::args_os()));
}
