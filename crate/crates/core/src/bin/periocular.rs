fn main() {
    std::process::exit(periocular::cli::main_with_args(std::env::args_os()));
}
