fn main() {
    std::process::exit(fpforge::cli::run(std::env::args_os()));
}
