fn main() {
    std::process::exit(dia_lab::cli::run(std::env::args_os()));
}
