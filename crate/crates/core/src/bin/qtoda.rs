fn main() {
    std::process::exit(qtoda::cli::main_from(std::env::args_os()));
}
