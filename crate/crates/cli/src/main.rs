fn main() {
    std::process::exit(fpbound_cli::run(std::env::args_os()));
}
