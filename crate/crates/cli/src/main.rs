fn main() {
    std::process::exit(npwigner_cli::run(std::env::args_os()));
}
