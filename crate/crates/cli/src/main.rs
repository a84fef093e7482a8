fn main() {
    std::process::exit(ckdv_cli::run(std::env::args_os()));
}
